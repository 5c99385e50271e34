#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "evokernel/timeline.hpp"

namespace evokernel {

enum class Severity { Error, Warning, Internal };

inline const char* to_string(Severity s) {
    switch (s) {
        case Severity::Error: return "error";
        case Severity::Warning: return "warning";
        case Severity::Internal: return "internal";
    }
    return "error";
}

// One rule violation: which rule, at which tick (if tick-scoped), and the
// offending elements. Internal severity flags inconsistencies between a rule
// and a theorem derived from it, i.e. kernel bugs rather than bad input.
struct Violation {
    std::string axiom;
    std::optional<Tick> tick;
    std::vector<std::string> witnesses;
    Severity severity = Severity::Error;

    bool operator==(const Violation&) const = default;
};

class ValidationReport {
public:
    void add(std::string axiom, std::optional<Tick> tick,
             std::vector<std::string> witnesses,
             Severity severity = Severity::Error) {
        items_.push_back(Violation{std::move(axiom), tick,
                                   std::move(witnesses), severity});
    }

    void merge(const ValidationReport& other) {
        items_.insert(items_.end(), other.items_.begin(), other.items_.end());
    }

    // No errors and no internal inconsistencies; warnings are tolerated.
    bool ok() const {
        return std::none_of(items_.begin(), items_.end(), [](const Violation& v) {
            return v.severity != Severity::Warning;
        });
    }

    std::size_t count(const std::string& axiom) const {
        return static_cast<std::size_t>(
            std::count_if(items_.begin(), items_.end(), [&](const Violation& v) {
                return v.axiom == axiom;
            }));
    }

    const std::vector<Violation>& items() const { return items_; }

    void sort() {
        std::stable_sort(items_.begin(), items_.end(),
                         [](const Violation& a, const Violation& b) {
                             Tick ta = a.tick.value_or(Tick{0});
                             Tick tb = b.tick.value_or(Tick{0});
                             if (a.tick.has_value() != b.tick.has_value())
                                 return !a.tick.has_value();
                             if (ta != tb) return ta < tb;
                             if (a.axiom != b.axiom) return a.axiom < b.axiom;
                             return a.witnesses < b.witnesses;
                         });
    }

private:
    std::vector<Violation> items_;
};

}  // namespace evokernel
