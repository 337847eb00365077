#pragma once

#include <string>
#include <string_view>

namespace symsel {

enum class LinkKind { Identity, Log, ArcTanh };

/// A strictly monotone link g mapping a parameter domain onto the real line.
/// Identity acts on R, Log on (0, inf), ArcTanh on (-1, 1).
class LinkFunction {
public:
    constexpr LinkFunction() = default;
    constexpr explicit LinkFunction(LinkKind kind) : kind_(kind) {}

    constexpr LinkKind kind() const noexcept { return kind_; }

    /// g(x)
    double forward(double x) const;
    /// g^{-1}(eta). ArcTanh clamps eta to |eta| <= 18 so |result| < 1.
    double inverse(double eta) const;
    /// g'(x), strictly positive on the domain interior.
    double derivative(double x) const;

    std::string_view name() const noexcept;
    static LinkFunction parse(std::string_view name);

    friend constexpr bool operator==(LinkFunction a, LinkFunction b) { return a.kind_ == b.kind_; }

private:
    LinkKind kind_ = LinkKind::Identity;
};

inline constexpr double kArcTanhClamp = 18.0;

}  // namespace symsel
