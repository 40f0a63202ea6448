#include "gazeplan/core/target_registry.hpp"

#include "gazeplan/error.hpp"

#include <cctype>
#include <algorithm>
#include <cmath>

namespace gazeplan {

void validate_target(const Target& target) {
    if (target.id.empty()) throw ValidationError("target id must not be empty");
    const Vec3& p = target.position;
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
        throw ValidationError("target '" + target.id.str() + "' has a non-finite position");
    }
    if (target.kind != TargetKind::Environment && !(p.z > 0.0)) {
        throw ValidationError("target '" + target.id.str() + "' must be in front of the robot (z > 0)");
    }
    for (const auto& alias : target.aliases) {
        if (alias.empty()) throw ValidationError("target '" + target.id.str() + "' has an empty alias");
        if (std::any_of(alias.begin(), alias.end(), [](unsigned char c) { return std::isupper(c); })) {
            throw ValidationError("target '" + target.id.str() + "' alias '" + alias +
                                  "' must be lowercase");
        }
    }
}

TargetRegistry::TargetRegistry(std::vector<Target> targets) {
    for (auto& target : targets) add(std::move(target));
    if (environment_.empty()) {
        add(Target{TargetId{"env"}, TargetKind::Environment, Vec3{0.0, 0.0, 1.0}, "Environment", {}});
    }
}

void TargetRegistry::add(Target target) {
    validate_target(target);
    if (contains(target.id)) throw ValidationError("duplicate target id '" + target.id.str() + "'");
    if (target.kind == TargetKind::Environment) {
        if (!environment_.empty()) throw ValidationError("more than one environment target");
        environment_ = target.id;
    }
    targets_.push_back(std::move(target));
}

void TargetRegistry::remove(const TargetId& id) {
    const auto it = std::find_if(targets_.begin(), targets_.end(),
                                 [&](const Target& t) { return t.id == id; });
    if (it == targets_.end()) throw UnknownTargetError(id.str());
    if (it->kind == TargetKind::Environment) throw KindError("the environment target cannot be removed");
    targets_.erase(it);
}

bool TargetRegistry::contains(const TargetId& id) const noexcept { return find(id) != nullptr; }

const Target* TargetRegistry::find(const TargetId& id) const noexcept {
    const auto it = std::find_if(targets_.begin(), targets_.end(),
                                 [&](const Target& t) { return t.id == id; });
    return it == targets_.end() ? nullptr : &*it;
}

const Target& TargetRegistry::at(const TargetId& id) const {
    const Target* target = find(id);
    if (target == nullptr) throw UnknownTargetError(id.str());
    return *target;
}

void TargetRegistry::set_position(const TargetId& id, const Vec3& position) {
    auto it = std::find_if(targets_.begin(), targets_.end(),
                           [&](const Target& t) { return t.id == id; });
    if (it == targets_.end()) throw UnknownTargetError(id.str());
    it->position = position;
}

std::vector<Target> TargetRegistry::of_kind(TargetKind kind) const {
    std::vector<Target> out;
    std::copy_if(targets_.begin(), targets_.end(), std::back_inserter(out),
                 [kind](const Target& t) { return t.kind == kind; });
    return out;
}

}  // namespace gazeplan
