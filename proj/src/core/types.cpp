#include "gazeplan/core/types.hpp"

#include "gazeplan/error.hpp"

#include <cmath>

namespace gazeplan {

std::string_view to_string(TargetKind kind) noexcept {
    switch (kind) {
        case TargetKind::User: return "user";
        case TargetKind::TaskObject: return "task_object";
        case TargetKind::Environment: return "environment";
    }
    return "user";
}

std::optional<TargetKind> target_kind_from_string(std::string_view text) noexcept {
    if (text == "user") return TargetKind::User;
    if (text == "task_object") return TargetKind::TaskObject;
    if (text == "environment") return TargetKind::Environment;
    return std::nullopt;
}

Priority::Priority(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw RangeError("priority " + std::to_string(value) + " outside [0, 1]");
    }
}

}  // namespace gazeplan
