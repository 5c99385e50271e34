#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace evokernel {

// Discrete, linearly ordered time axis starting at 0.
struct Tick {
    std::uint64_t v = 0;

    constexpr Tick() = default;
    constexpr explicit Tick(std::uint64_t n) : v(n) {}

    constexpr auto operator<=>(const Tick&) const = default;
    constexpr Tick next() const { return Tick{v + 1}; }
    constexpr Tick prev() const {
        return v == 0 ? Tick{0} : Tick{v - 1};
    }
};

constexpr Tick tick(std::uint64_t n) { return Tick{n}; }

// Closed interval of ticks; hi == nullopt means unbounded to the right.
struct TickRange {
    Tick lo;
    std::optional<Tick> hi;

    bool contains(Tick t) const { return t >= lo && (!hi || t <= *hi); }
};

// Partial function Tick -> V stored as ordered, disjoint, value-coalesced
// runs. A run without `to` extends to infinity; only the last run may be
// open. Equality is extensional: two maps are equal iff they are defined on
// the same ticks with equal values, which the normal form makes structural.
template <typename V>
class TimedMap {
public:
    struct Run {
        Tick from;
        std::optional<Tick> to;  // inclusive; nullopt = open-ended
        V value;
    };

    TimedMap() = default;

    static TimedMap from_runs(std::vector<Run> runs) {
        TimedMap m;
        m.runs_ = std::move(runs);
        m.normalize();
        return m;
    }

    bool empty() const { return runs_.empty(); }
    const std::vector<Run>& runs() const { return runs_; }

    bool defined_at(Tick t) const { return find(t) != nullptr; }

    // nullptr when undefined at t.
    const V* at(Tick t) const {
        const Run* r = find(t);
        return r ? &r->value : nullptr;
    }

    std::optional<Tick> first_defined() const {
        if (runs_.empty()) return std::nullopt;
        return runs_.front().from;
    }

    // Last tick at which the map changes (a birth, a value switch, or the
    // tick after a closed run's end). 0 for the empty map.
    Tick last_change() const {
        Tick h{0};
        for (const Run& r : runs_) {
            h = std::max(h, r.from);
            if (r.to) h = std::max(h, r.to->next());
        }
        return h;
    }

    // prefix(m, t): s <= t -> m(s); s > t -> m(t). When m is undefined at t
    // the result is the plain restriction to s <= t.
    TimedMap prefixed(Tick t) const {
        std::vector<Run> out;
        for (const Run& r : runs_) {
            if (r.from > t) break;
            Run c = r;
            if (c.to && *c.to > t) c.to = t;
            if (!c.to || *c.to >= t) {
                // This run covers t: the prefix continues its value forever.
                c.to = std::nullopt;
                out.push_back(std::move(c));
                break;
            }
            out.push_back(std::move(c));
        }
        return from_runs(std::move(out));
    }

    // Restriction of the domain to the given range.
    TimedMap restricted(const TickRange& range) const {
        std::vector<Run> out;
        for (const Run& r : runs_) {
            Tick lo = std::max(r.from, range.lo);
            std::optional<Tick> hi = r.to;
            if (range.hi && (!hi || *hi > *range.hi)) hi = *range.hi;
            if (hi && lo > *hi) continue;
            out.push_back(Run{lo, hi, r.value});
        }
        return from_runs(std::move(out));
    }

    // Closes any run covering t at t and makes the map undefined afterwards.
    // Precondition: defined at t.
    TimedMap terminated_at(Tick t) const {
        std::vector<Run> out;
        for (const Run& r : runs_) {
            if (r.from > t) continue;
            Run c = r;
            if (!c.to || *c.to > t) c.to = t;
            out.push_back(std::move(c));
        }
        return from_runs(std::move(out));
    }

    // Value v from tick t onwards, open-ended; earlier ticks keep their
    // values, and any previously open run is closed at t-1. Used for edits
    // on histories frozen before t.
    TimedMap with_value_from(Tick t, V v) const {
        std::vector<Run> out;
        for (const Run& r : runs_) {
            if (r.from >= t) continue;
            Run c = r;
            if (!c.to || *c.to >= t) c.to = t.prev();
            out.push_back(std::move(c));
        }
        out.push_back(Run{t, std::nullopt, std::move(v)});
        return from_runs(std::move(out));
    }

    // Ticks where the map may change value or definedness: run starts and
    // the ticks just after closed runs.
    std::vector<Tick> breakpoints() const {
        std::vector<Tick> out;
        for (const Run& r : runs_) {
            out.push_back(r.from);
            if (r.to) out.push_back(r.to->next());
        }
        return out;
    }

    bool operator==(const TimedMap& other) const {
        if (runs_.size() != other.runs_.size()) return false;
        for (std::size_t i = 0; i < runs_.size(); ++i) {
            const Run& a = runs_[i];
            const Run& b = other.runs_[i];
            if (a.from != b.from || a.to != b.to || !(a.value == b.value))
                return false;
        }
        return true;
    }

private:
    std::vector<Run> runs_;

    const Run* find(Tick t) const {
        for (const Run& r : runs_) {
            if (t < r.from) return nullptr;
            if (!r.to || t <= *r.to) return &r;
        }
        return nullptr;
    }

    void normalize() {
        std::sort(runs_.begin(), runs_.end(),
                  [](const Run& a, const Run& b) { return a.from < b.from; });
        for (std::size_t i = 0; i < runs_.size(); ++i) {
            const Run& r = runs_[i];
            if (r.to && *r.to < r.from)
                throw std::invalid_argument("timed map: run ends before it starts");
            if (i + 1 < runs_.size()) {
                const Run& n = runs_[i + 1];
                if (!r.to || *r.to >= n.from)
                    throw std::invalid_argument("timed map: overlapping runs");
            }
        }
        std::vector<Run> merged;
        for (Run& r : runs_) {
            if (!merged.empty()) {
                Run& p = merged.back();
                if (p.to && p.to->next() == r.from && p.value == r.value) {
                    p.to = r.to;
                    continue;
                }
            }
            merged.push_back(std::move(r));
        }
        runs_ = std::move(merged);
    }
};

}  // namespace evokernel
