#include "evokernel/values.hpp"

#include <algorithm>
#include <stdexcept>

namespace evokernel {

InstanceValue InstanceValue::str(std::string s) {
    InstanceValue v;
    v.kind = Kind::Str;
    v.text = std::move(s);
    return v;
}

InstanceValue InstanceValue::nat_value(std::int64_t n) {
    InstanceValue v;
    v.kind = Kind::Nat;
    v.nat = n;
    return v;
}

InstanceValue InstanceValue::sur(std::string id) {
    InstanceValue v;
    v.kind = Kind::Sur;
    v.text = std::move(id);
    return v;
}

InstanceValue InstanceValue::tuple(
    std::vector<std::pair<std::string, InstanceValue>> fields) {
    InstanceValue v;
    v.kind = Kind::Tuple;
    std::sort(fields.begin(), fields.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < fields.size(); ++i)
        if (fields[i].first == fields[i - 1].first)
            throw std::invalid_argument("tuple with duplicate role: " + fields[i].first);
    v.fields = std::move(fields);
    return v;
}

InstanceValue InstanceValue::set(std::vector<InstanceValue> members) {
    InstanceValue v;
    v.kind = Kind::Set;
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    v.members = std::move(members);
    return v;
}

const InstanceValue* InstanceValue::field(const std::string& role) const {
    for (const auto& [name, value] : fields)
        if (name == role) return &value;
    return nullptr;
}

int InstanceValue::compare(const InstanceValue& a, const InstanceValue& b) {
    if (a.kind != b.kind)
        return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
    switch (a.kind) {
        case Kind::Str:
        case Kind::Sur:
            return a.text.compare(b.text);
        case Kind::Nat:
            return a.nat < b.nat ? -1 : (a.nat > b.nat ? 1 : 0);
        case Kind::Tuple: {
            std::size_t n = std::min(a.fields.size(), b.fields.size());
            for (std::size_t i = 0; i < n; ++i) {
                int c = a.fields[i].first.compare(b.fields[i].first);
                if (c != 0) return c < 0 ? -1 : 1;
                c = compare(a.fields[i].second, b.fields[i].second);
                if (c != 0) return c;
            }
            if (a.fields.size() != b.fields.size())
                return a.fields.size() < b.fields.size() ? -1 : 1;
            return 0;
        }
        case Kind::Set: {
            std::size_t n = std::min(a.members.size(), b.members.size());
            for (std::size_t i = 0; i < n; ++i) {
                int c = compare(a.members[i], b.members[i]);
                if (c != 0) return c;
            }
            if (a.members.size() != b.members.size())
                return a.members.size() < b.members.size() ? -1 : 1;
            return 0;
        }
    }
    return 0;
}

std::string InstanceValue::render() const {
    switch (kind) {
        case Kind::Str:
            return "\"" + text + "\"";
        case Kind::Nat:
            return std::to_string(nat);
        case Kind::Sur:
            return text;
        case Kind::Tuple: {
            std::string out = "{";
            bool first = true;
            for (const auto& [name, value] : fields) {
                if (!first) out += ", ";
                first = false;
                out += name + ": " + value.render();
            }
            return out + "}";
        }
        case Kind::Set: {
            std::string out = "#{";
            bool first = true;
            for (const InstanceValue& m : members) {
                if (!first) out += ", ";
                first = false;
                out += m.render();
            }
            return out + "}";
        }
    }
    return "";
}

bool known_domain(const std::string& name) {
    return name == "String" || name == "Natno";
}

bool domain_contains(const std::string& name, const InstanceValue& v) {
    if (name == "String") return v.kind == InstanceValue::Kind::Str;
    if (name == "Natno") return v.kind == InstanceValue::Kind::Nat && v.nat >= 0;
    return false;
}

bool in_some_domain(const InstanceValue& v) {
    return domain_contains("String", v) || domain_contains("Natno", v);
}

}  // namespace evokernel
