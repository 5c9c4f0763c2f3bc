#include "gtgd/term.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <ostream>
#include <shared_mutex>
#include <unordered_map>

namespace gtgd {

namespace {

struct SymbolTable {
    std::shared_mutex mutex;
    std::deque<std::string> names;
    std::unordered_map<std::string_view, std::uint32_t> ids;
};

SymbolTable& table()
{
    static SymbolTable t;
    return t;
}

std::size_t mix(std::size_t h, std::size_t v)
{
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

} // namespace

Symbol Symbol::intern(std::string_view name)
{
    auto& t = table();
    {
        std::shared_lock lock(t.mutex);
        auto it = t.ids.find(name);
        if (it != t.ids.end())
            return Symbol(it->second);
    }
    std::unique_lock lock(t.mutex);
    auto it = t.ids.find(name);
    if (it != t.ids.end())
        return Symbol(it->second);
    auto id = static_cast<std::uint32_t>(t.names.size());
    t.names.emplace_back(name);
    t.ids.emplace(t.names.back(), id);
    return Symbol(id);
}

const std::string& Symbol::name() const
{
    auto& t = table();
    std::shared_lock lock(t.mutex);
    return t.names.at(id_);
}

bool Term::contains_variable(VarId v) const
{
    if (kind_ == TermKind::Variable)
        return value_ == v;
    for (const auto& a : args_)
        if (a.contains_variable(v))
            return true;
    return false;
}

bool Term::is_ground() const
{
    if (kind_ == TermKind::Variable)
        return false;
    return std::all_of(args_.begin(), args_.end(), [](const Term& t) { return t.is_ground(); });
}

std::size_t Term::hash() const
{
    std::size_t h = mix(static_cast<std::size_t>(kind_), value_);
    for (const auto& a : args_)
        h = mix(h, a.hash());
    return h;
}

bool operator==(const Term& a, const Term& b)
{
    return a.kind_ == b.kind_ && a.value_ == b.value_ && a.args_ == b.args_;
}

std::strong_ordering operator<=>(const Term& a, const Term& b)
{
    if (auto c = a.kind_ <=> b.kind_; c != 0)
        return c;
    if (auto c = a.value_ <=> b.value_; c != 0)
        return c;
    if (auto c = a.args_.size() <=> b.args_.size(); c != 0)
        return c;
    for (std::size_t i = 0; i < a.args_.size(); ++i)
        if (auto c = a.args_[i] <=> b.args_[i]; c != 0)
            return c;
    return std::strong_ordering::equal;
}

bool Atom::has_function() const
{
    return std::any_of(args.begin(), args.end(), [](const Term& t) { return t.is_function(); });
}

bool Atom::is_ground() const
{
    return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
}

bool Atom::contains_variable(VarId v) const
{
    return std::any_of(args.begin(), args.end(), [v](const Term& t) { return t.contains_variable(v); });
}

std::size_t Atom::hash() const
{
    std::size_t h = relation.id();
    for (const auto& a : args)
        h = mix(h, a.hash());
    return h;
}

std::strong_ordering operator<=>(const Atom& a, const Atom& b)
{
    if (auto c = a.relation <=> b.relation; c != 0)
        return c;
    if (auto c = a.args.size() <=> b.args.size(); c != 0)
        return c;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (auto c = a.args[i] <=> b.args[i]; c != 0)
            return c;
    return std::strong_ordering::equal;
}

bool contains(const VarSet& s, VarId v)
{
    return std::binary_search(s.begin(), s.end(), v);
}

void insert(VarSet& s, VarId v)
{
    auto it = std::lower_bound(s.begin(), s.end(), v);
    if (it == s.end() || *it != v)
        s.insert(it, v);
}

void collect_vars(const Term& t, VarSet& out)
{
    if (t.is_variable()) {
        insert(out, t.index());
        return;
    }
    for (const auto& a : t.args())
        collect_vars(a, out);
}

void collect_vars(const Atom& a, VarSet& out)
{
    for (const auto& t : a.args)
        collect_vars(t, out);
}

void collect_vars(std::span<const Atom> atoms, VarSet& out)
{
    for (const auto& a : atoms)
        collect_vars(a, out);
}

VarSet vars_of(const Atom& a)
{
    VarSet s;
    collect_vars(a, s);
    return s;
}

VarSet vars_of(std::span<const Atom> atoms)
{
    VarSet s;
    collect_vars(atoms, s);
    return s;
}

bool intersects(const VarSet& a, const VarSet& b)
{
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j)
            return true;
        if (*i < *j)
            ++i;
        else
            ++j;
    }
    return false;
}

bool is_subset(const VarSet& a, const VarSet& b)
{
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool has_function(std::span<const Atom> atoms)
{
    return std::any_of(atoms.begin(), atoms.end(), [](const Atom& a) { return a.has_function(); });
}

int compare_canonical(const Term& a, const Term& b)
{
    if (a.kind() != b.kind())
        return a.kind() < b.kind() ? -1 : 1;
    switch (a.kind()) {
    case TermKind::Variable:
    case TermKind::Null:
        return a.index() < b.index() ? -1 : (a.index() > b.index() ? 1 : 0);
    case TermKind::Constant:
        if (a.symbol() == b.symbol())
            return 0;
        return a.symbol().name() < b.symbol().name() ? -1 : 1;
    case TermKind::Function: {
        if (a.symbol() != b.symbol())
            return a.symbol().name() < b.symbol().name() ? -1 : 1;
        if (a.args().size() != b.args().size())
            return a.args().size() < b.args().size() ? -1 : 1;
        for (std::size_t i = 0; i < a.args().size(); ++i)
            if (int c = compare_canonical(a.args()[i], b.args()[i]))
                return c;
        return 0;
    }
    }
    return 0;
}

int compare_canonical(const Atom& a, const Atom& b)
{
    if (a.relation != b.relation) {
        int c = a.relation.name().compare(b.relation.name());
        if (c != 0)
            return c < 0 ? -1 : 1;
    }
    if (a.args.size() != b.args.size())
        return a.args.size() < b.args.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (int c = compare_canonical(a.args[i], b.args[i]))
            return c;
    return 0;
}

std::string var_name(VarId v)
{
    if (v < kExistentialBase)
        return "X" + std::to_string(v + 1);
    if (v < kScratchBase)
        return "Y" + std::to_string(v - kExistentialBase + 1);
    return "V" + std::to_string(v - kScratchBase);
}

std::string to_string(const Term& t)
{
    switch (t.kind()) {
    case TermKind::Constant:
        return t.symbol().name();
    case TermKind::Variable:
        return var_name(t.index());
    case TermKind::Null:
        return "_n" + std::to_string(t.index());
    case TermKind::Function: {
        std::string s = t.symbol().name() + "(";
        for (std::size_t i = 0; i < t.args().size(); ++i) {
            if (i)
                s += ", ";
            s += to_string(t.args()[i]);
        }
        return s + ")";
    }
    }
    return {};
}

std::string to_string(const Atom& a)
{
    std::string s = a.relation.name() + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i)
            s += ", ";
        s += to_string(a.args[i]);
    }
    return s + ")";
}

std::string to_string(std::span<const Atom> atoms)
{
    std::string s;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i)
            s += ", ";
        s += to_string(atoms[i]);
    }
    return s;
}

std::ostream& operator<<(std::ostream& os, const Term& t)
{
    return os << to_string(t);
}

std::ostream& operator<<(std::ostream& os, const Atom& a)
{
    return os << to_string(a);
}

} // namespace gtgd
