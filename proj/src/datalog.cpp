#include "gtgd/datalog.hpp"

#include <map>
#include <unordered_set>

namespace gtgd {

namespace {

struct Store {
    std::map<Symbol, std::vector<Atom>> by_relation;
    std::unordered_set<Atom, AtomHash> all;

    bool add(const Atom& a)
    {
        if (!all.insert(a).second)
            return false;
        by_relation[a.relation].push_back(a);
        return true;
    }
    std::size_t count(Symbol r) const
    {
        auto it = by_relation.find(r);
        return it == by_relation.end() ? 0 : it->second.size();
    }
};

using Marks = std::map<Symbol, std::size_t>;

std::size_t mark(const Marks& m, Symbol r)
{
    auto it = m.find(r);
    return it == m.end() ? 0 : it->second;
}

// Body atom j draws from [0, old) if j < delta_pos, from [old, cur) if
// j == delta_pos, and from [0, cur) otherwise.
void join(const Rule& rule, std::size_t j, std::size_t delta_pos, const Store& store, const Marks& old_end,
          const Marks& cur_end, Substitution& theta, std::vector<Atom>& out)
{
    if (j == rule.body.size()) {
        Atom h = theta.apply(rule.head);
        GTGD_CHECK(h.is_ground(), "rule head not covered by its body: " + to_string(rule));
        out.push_back(std::move(h));
        return;
    }
    const Atom& pattern = rule.body[j];
    auto it = store.by_relation.find(pattern.relation);
    if (it == store.by_relation.end())
        return;
    std::size_t lo = 0;
    std::size_t hi = mark(cur_end, pattern.relation);
    if (j < delta_pos)
        hi = mark(old_end, pattern.relation);
    else if (j == delta_pos)
        lo = mark(old_end, pattern.relation);
    for (std::size_t k = lo; k < hi; ++k) {
        Substitution saved = theta;
        if (match(pattern, it->second[k], theta))
            join(rule, j + 1, delta_pos, store, old_end, cur_end, theta, out);
        theta = std::move(saved);
    }
}

} // namespace

Instance datalog_fixpoint(std::span<const Rule> program, const Instance& facts)
{
    Store store;
    for (const auto& f : facts)
        store.add(f);
    for (const auto& r : program) {
        if (r.body.empty()) {
            GTGD_CHECK(r.head.is_ground(), "rule head not covered by its body: " + to_string(r));
            store.add(r.head);
        }
    }

    Marks old_end;
    Marks cur_end;
    for (const auto& [r, v] : store.by_relation)
        cur_end[r] = v.size();

    while (true) {
        std::vector<Atom> fresh;
        for (const auto& rule : program) {
            for (std::size_t d = 0; d < rule.body.size(); ++d) {
                Symbol r = rule.body[d].relation;
                if (mark(old_end, r) == mark(cur_end, r))
                    continue;
                Substitution theta;
                join(rule, 0, d, store, old_end, cur_end, theta, fresh);
            }
        }
        bool changed = false;
        for (const auto& f : fresh)
            changed |= store.add(f);
        if (!changed)
            break;
        old_end = cur_end;
        for (const auto& [r, v] : store.by_relation)
            cur_end[r] = v.size();
    }
    return Instance(store.all.begin(), store.all.end());
}

} // namespace gtgd
