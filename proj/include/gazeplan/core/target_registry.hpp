#pragma once

#include "gazeplan/core/types.hpp"

#include <optional>
#include <vector>

namespace gazeplan {

/// Live gaze targets in registration order. Holds exactly one ENVIRONMENT
/// pseudo-target.
class TargetRegistry {
public:
    /// Builds a registry from an initial list; adds a default environment
    /// target (id "env") when none is present. Throws ValidationError on
    /// duplicate ids, multiple environments or invalid positions.
    explicit TargetRegistry(std::vector<Target> targets = {});

    void add(Target target);
    void remove(const TargetId& id);

    bool contains(const TargetId& id) const noexcept;
    const Target& at(const TargetId& id) const;
    const Target* find(const TargetId& id) const noexcept;
    void set_position(const TargetId& id, const Vec3& position);

    const TargetId& environment() const noexcept { return environment_; }

    /// Targets in registration order (environment included).
    const std::vector<Target>& all() const noexcept { return targets_; }
    std::vector<Target> of_kind(TargetKind kind) const;

    friend bool operator==(const TargetRegistry&, const TargetRegistry&) = default;

private:
    std::vector<Target> targets_;
    TargetId environment_;
};

/// Throws ValidationError when the position breaks the Target invariants.
void validate_target(const Target& target);

}  // namespace gazeplan
