#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "evokernel/history.hpp"

namespace evokernel {

// One application model version: the per-tick snapshot of a history,
// partitioned by evolution class and keyed by element id. Domain entries
// keep one row per concretisation element so functionality violations stay
// observable.
struct AppModelVersion {
    Tick at;
    std::shared_ptr<const Universe> universe;
    std::set<std::string> otypes;
    std::map<std::string, OwnedConstraints> constraints;
    std::map<std::string, OwnedTasks> tasks;
    std::map<std::string, InstanceTyping> typings;
    std::vector<std::tuple<std::string, std::string, std::string>>
        domain_entries;  // (element id, label, domain)

    // Current-version information structure: relations restricted to the
    // alive types.
    Universe restricted() const;

    std::map<std::string, std::string> domain_map() const;
    std::vector<InstanceTyping> typing_list() const;
};

AppModelVersion derive_version(const History& h, Tick t);

// Pop_t(x): the values typed with x at the snapshot's tick.
ValueSet pop_at(const AppModelVersion& v, const std::string& otype);
ValueSet pop_at(const History& h, Tick t, const std::string& otype);

// Pop over all of time up to the horizon; open-ended runs contribute once.
ValueSet pop_infinity(const History& h, const std::string& otype);

// The version-level rules, checked in a fixed order:
//   ActiveLife          typing sets contain alive types only
//   ActiveRelatedness   typing sets are pairwise type-related
//   FoundedActivity     typing-set membership inherits weakly
//   UniqueRoot          at most one root per typing set
//   LiveFoundation      aliveness inherits weakly
//   FullConcretisation  domain assignment total/functional on alive labels
//   LabelTyping         concrete values lie in their label's domain
//   AliveDefinitions    owners of alive definitions are alive
//   TypeRelDef          owners are pairwise type-related
//   DefInheritance      ownership inherits strongly
//   DanglingTypes       definitions depend on alive schema only
//   Strengthening       an offspring's private definition implies its
//                       ancestor's (Unknown downgrades to a warning)
// Root and parent relationships are those of the restricted structure.
ValidationReport check_amv(const AppModelVersion& v);

// Extra-temporal typing rules: ExclRootPop (unrelated roots have disjoint
// populations over all time) at error severity, plus enumeration of the
// theorems that follow from it (ExclPop for arbitrary unrelated pairs,
// PopDist per tick) at internal severity, since their failure with
// ExclRootPop passing means the kernel contradicts itself.
ValidationReport check_strong_typing(const History& h);

// check_amv plus adapter verdicts (IsSchema / IsPop rows on failure).
ValidationReport check_version(const AppModelVersion& v);

bool is_am(const AppModelVersion& v);

}  // namespace evokernel
