#include "symsel/links.hpp"

#include "symsel/error.hpp"

#include <algorithm>
#include <cmath>

namespace symsel {

double LinkFunction::forward(double x) const {
    switch (kind_) {
        case LinkKind::Identity:
            return x;
        case LinkKind::Log:
            if (!(x > 0.0)) throw DomainError("log link: argument must be positive");
            return std::log(x);
        case LinkKind::ArcTanh:
            if (!(std::fabs(x) < 1.0)) throw DomainError("arctanh link: argument must lie in (-1, 1)");
            return std::atanh(x);
    }
    return x;
}

double LinkFunction::inverse(double eta) const {
    switch (kind_) {
        case LinkKind::Identity:
            return eta;
        case LinkKind::Log:
            return std::exp(eta);
        case LinkKind::ArcTanh:
            return std::tanh(std::clamp(eta, -kArcTanhClamp, kArcTanhClamp));
    }
    return eta;
}

double LinkFunction::derivative(double x) const {
    switch (kind_) {
        case LinkKind::Identity:
            return 1.0;
        case LinkKind::Log:
            return 1.0 / x;
        case LinkKind::ArcTanh:
            return 1.0 / (1.0 - x * x);
    }
    return 1.0;
}

std::string_view LinkFunction::name() const noexcept {
    switch (kind_) {
        case LinkKind::Identity:
            return "identity";
        case LinkKind::Log:
            return "log";
        case LinkKind::ArcTanh:
            return "arctanh";
    }
    return "identity";
}

LinkFunction LinkFunction::parse(std::string_view name) {
    if (name == "identity") return LinkFunction(LinkKind::Identity);
    if (name == "log") return LinkFunction(LinkKind::Log);
    if (name == "arctanh" || name == "atanh") return LinkFunction(LinkKind::ArcTanh);
    throw SpecError("unknown link function '" + std::string(name) + "'");
}

}  // namespace symsel
