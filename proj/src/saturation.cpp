#include "gtgd/saturation.hpp"

#include "gtgd/indexing.hpp"
#include "gtgd/inference.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace gtgd {

std::string to_string(Algorithm a)
{
    switch (a) {
    case Algorithm::ExbDR:
        return "exbdr";
    case Algorithm::SkDR:
        return "skdr";
    case Algorithm::HypDR:
        return "hypdr";
    case Algorithm::FullDR:
        return "fulldr";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view s)
{
    for (auto a : {Algorithm::ExbDR, Algorithm::SkDR, Algorithm::HypDR, Algorithm::FullDR})
        if (to_string(a) == s)
            return a;
    return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

std::size_t atom_count(const Tgd& t)
{
    return t.body.size() + t.head.size();
}

std::size_t atom_count(const Rule& r)
{
    return r.body.size() + 1;
}

bool skolem_headed(const Rule& r)
{
    return !has_function(r.body) && r.head.has_function();
}

// Given-clause loop shared by all four calculi.
template <class Clause>
class Saturator {
public:
    Saturator(const SaturationOptions& opts, const SignatureStats& sig, std::set<Symbol> body_relations)
        : opts_(opts), sig_(sig), body_relations_(std::move(body_relations)),
          clusters_(ClusterMap::compute(sig, opts.clusters)), start_(Clock::now())
    {
        fulldr_range_ = sig.max_head_width + sig.constants.size();
    }

    void add_input(const Clause& c)
    {
        Clause n = normalize(c);
        std::string key = to_string(n);
        if (live_.count(key))
            return;
        enqueue(std::move(n), std::move(key));
        ++stats_.input_size;
    }

    void run()
    {
        while (!queue_.empty()) {
            if (Clock::now() - start_ > opts_.timeout) {
                finish_stats();
                throw SaturationTimeout(stats_);
            }
            ++stats_.iterations;
            ClauseId id = queue_.begin()->second;
            queue_.erase(queue_.begin());
            entries_[id].worked = true;
            worked_.insert(id);
            unif_insert(id);
            for (auto& c : infer(id))
                process(std::move(c));
        }
        finish_stats();
    }

    std::vector<Clause> worked_off() const
    {
        std::vector<Clause> out;
        for (ClauseId id : worked_)
            out.push_back(entries_[id].clause);
        return out;
    }

    DatalogProgram program() const
    {
        std::vector<std::pair<std::string, Rule>> rules;
        for (ClauseId id : worked_) {
            const Clause& c = entries_[id].clause;
            if constexpr (std::is_same_v<Clause, Tgd>) {
                if (is_full(c) && c.head.size() == 1 && !has_function(c.body) && !has_function(c.head))
                    rules.emplace_back(entries_[id].key, to_rule(c));
            } else {
                if (is_skolem_free(c))
                    rules.emplace_back(entries_[id].key, c);
            }
        }
        std::sort(rules.begin(), rules.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        DatalogProgram out;
        for (auto& [k, r] : rules)
            out.push_back(std::move(r));
        return out;
    }

    SaturationStats stats() const { return stats_; }

private:
    struct Entry {
        Clause clause;
        std::string key;
        FeatureVector fv;
        bool live = true;
        bool worked = false;
    };

    void finish_stats()
    {
        auto p = program();
        stats_.output_size = p.size();
        stats_.max_body_atoms = 0;
        for (const auto& r : p)
            stats_.max_body_atoms = std::max(stats_.max_body_atoms, r.body.size());
        stats_.time_ms = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    }

    void enqueue(Clause n, std::string key)
    {
        auto id = static_cast<ClauseId>(entries_.size());
        FeatureVector fv = feature_vector(n, clusters_);
        subsumption_index_.insert(id, fv);
        queue_.emplace(atom_count(n), id);
        live_.emplace(key, id);
        ever_.insert(key);
        entries_.push_back(Entry{std::move(n), std::move(key), std::move(fv)});
    }

    void remove(ClauseId id)
    {
        Entry& e = entries_[id];
        e.live = false;
        live_.erase(e.key);
        subsumption_index_.remove(id, e.fv);
        if (e.worked) {
            worked_.erase(id);
            unif_remove(id);
        } else {
            queue_.erase({atom_count(e.clause), id});
        }
    }

    std::vector<ClauseId> live_ids() const
    {
        std::vector<ClauseId> out;
        for (ClauseId i = 0; i < entries_.size(); ++i)
            if (entries_[i].live)
                out.push_back(i);
        return out;
    }

    void process(Clause raw)
    {
        std::vector<Clause> pieces;
        if constexpr (std::is_same_v<Clause, Tgd>)
            pieces = head_normal_form(raw);
        else
            pieces.push_back(std::move(raw));

        for (auto& p : pieces) {
            ++stats_.derived;
            Clause n = normalize(p);
            if (is_syntactic_tautology(n)) {
                ++stats_.tautologies;
                continue;
            }
            std::string key = to_string(n);
            if (live_.count(key)) {
                ++stats_.duplicates;
                continue;
            }
            if (opts_.algorithm != Algorithm::FullDR) {
                if constexpr (std::is_same_v<Clause, Tgd>)
                    GTGD_CHECK(is_guarded(n), "derived TGD is not guarded: " + key);
                else
                    GTGD_CHECK(is_guarded_rule(n), "derived rule is not guarded: " + key);
            }
            if (opts_.subsumption) {
                FeatureVector fv = feature_vector(n, clusters_);
                auto fwd = opts_.use_indexes ? subsumption_index_.query(fv, SubsumptionQuery::Subsuming) : live_ids();
                bool redundant = false;
                for (ClauseId c : fwd) {
                    if (entries_[c].live && subsumes_approx(entries_[c].clause, n)) {
                        redundant = true;
                        break;
                    }
                }
                if (redundant) {
                    ++stats_.fwd_subsumed;
                    continue;
                }
                GTGD_CHECK(!ever_.count(key), "clause enqueued twice: " + key);
                auto bwd = opts_.use_indexes ? subsumption_index_.query(fv, SubsumptionQuery::Subsumed) : live_ids();
                for (ClauseId c : bwd) {
                    if (entries_[c].live && subsumes_approx(n, entries_[c].clause)) {
                        remove(c);
                        ++stats_.bwd_subsumed;
                    }
                }
            } else {
                GTGD_CHECK(!ever_.count(key), "clause enqueued twice: " + key);
            }
            enqueue(std::move(n), std::move(key));
        }
    }

    bool keep(const Clause& c)
    {
        if (opts_.lookahead && !cheap_lookahead_keep(c, body_relations_)) {
            ++stats_.lookahead_dropped;
            return false;
        }
        return true;
    }

    void take(std::vector<Clause>& out, std::vector<Clause> cs)
    {
        for (auto& c : cs)
            if (keep(c))
                out.push_back(std::move(c));
    }

    std::vector<ClauseId> worked_sorted() const { return {worked_.begin(), worked_.end()}; }

    static void add_all(std::set<ClauseId>& dst, const std::vector<ClauseId>& src)
    {
        dst.insert(src.begin(), src.end());
    }

    // Unification index over the worked-off set.
    void unif_insert(ClauseId id)
    {
        if constexpr (std::is_same_v<Clause, Tgd>)
            relation_index_.insert(id, entries_[id].clause);
        else
            rule_index_.insert(id, entries_[id].clause);
    }

    void unif_remove(ClauseId id)
    {
        if constexpr (std::is_same_v<Clause, Tgd>)
            relation_index_.remove(id, entries_[id].clause);
        else
            rule_index_.remove(id, entries_[id].clause);
    }

    std::vector<Clause> infer(ClauseId id);

    const SaturationOptions& opts_;
    SignatureStats sig_;
    std::set<Symbol> body_relations_;
    ClusterMap clusters_;
    Clock::time_point start_;
    std::size_t fulldr_range_ = 0;

    std::vector<Entry> entries_;
    std::unordered_map<std::string, ClauseId> live_;
    std::unordered_set<std::string> ever_;
    std::set<std::pair<std::size_t, ClauseId>> queue_;
    std::set<ClauseId> worked_;
    SetTrie subsumption_index_;
    RelationIndex relation_index_;
    RuleIndex rule_index_;
    SaturationStats stats_;
};

template <>
std::vector<Tgd> Saturator<Tgd>::infer(ClauseId id)
{
    const Tgd given = entries_[id].clause;
    std::vector<Tgd> out;
    const bool full = is_full(given);

    auto candidates = [&](bool by_body_relation, std::span<const Atom> atoms) {
        if (!opts_.use_indexes)
            return worked_sorted();
        std::set<ClauseId> ids;
        for (const auto& a : atoms)
            add_all(ids, by_body_relation ? relation_index_.with_body_relation(a.relation)
                                          : relation_index_.with_head_relation(a.relation));
        return std::vector<ClauseId>(ids.begin(), ids.end());
    };

    if (opts_.algorithm == Algorithm::ExbDR) {
        auto check_width = [&](const std::vector<Tgd>& cs) {
            for (const auto& c : cs) {
                GTGD_CHECK(body_width(c) <= sig_.max_body_width, "ExbDR body width bound: " + to_string(c));
                GTGD_CHECK(head_width(c) <= sig_.max_head_width, "ExbDR head width bound: " + to_string(c));
            }
        };
        if (!full) {
            for (ClauseId w : candidates(true, given.head)) {
                const Tgd& other = entries_[w].clause;
                if (!is_full(other))
                    continue;
                auto cs = exbdr_apply(given, other);
                check_width(cs);
                take(out, std::move(cs));
            }
        } else {
            for (ClauseId w : candidates(false, given.body)) {
                const Tgd& other = entries_[w].clause;
                if (is_full(other))
                    continue;
                auto cs = exbdr_apply(other, given);
                check_width(cs);
                take(out, std::move(cs));
            }
        }
        return out;
    }

    // FullDR
    if (full) {
        for (ClauseId w : candidates(true, given.head)) {
            const Tgd& other = entries_[w].clause;
            if (is_full(other))
                take(out, fulldr_compose(given, other, fulldr_range_));
        }
        for (ClauseId w : candidates(false, given.body)) {
            if (w == id)
                continue;
            const Tgd& other = entries_[w].clause;
            if (is_full(other))
                take(out, fulldr_compose(other, given, fulldr_range_));
            else
                take(out, fulldr_propagate(other, given, fulldr_range_));
        }
    } else {
        for (ClauseId w : candidates(true, given.head)) {
            const Tgd& other = entries_[w].clause;
            if (is_full(other))
                take(out, fulldr_propagate(given, other, fulldr_range_));
        }
    }
    return out;
}

template <>
std::vector<Rule> Saturator<Rule>::infer(ClauseId id)
{
    const Rule given = entries_[id].clause;
    std::vector<Rule> out;

    auto body_unifiable = [&](const Atom& a) {
        return opts_.use_indexes ? rule_index_.body_unifiable(a) : worked_sorted();
    };
    auto head_unifiable = [&](const Atom& a) {
        return opts_.use_indexes ? rule_index_.head_unifiable(a) : worked_sorted();
    };

    if (opts_.algorithm == Algorithm::SkDR) {
        if (skolem_headed(given))
            for (ClauseId w : body_unifiable(given.head))
                take(out, skdr_apply(given, entries_[w].clause));
        const bool free = is_skolem_free(given);
        const VarSet vars = all_vars(given);
        std::set<ClauseId> firsts;
        for (const auto& a : given.body)
            if (a.has_function() || (free && vars_of(a) == vars))
                add_all(firsts, head_unifiable(a));
        for (ClauseId w : firsts)
            if (w != id && skolem_headed(entries_[w].clause))
                take(out, skdr_apply(entries_[w].clause, given));
        return out;
    }

    // HypDR
    PartnerLookup lookup = [&](const Atom& a) {
        std::vector<const Rule*> ps;
        for (ClauseId w : head_unifiable(a))
            if (skolem_headed(entries_[w].clause))
                ps.push_back(&entries_[w].clause);
        return ps;
    };
    if (is_skolem_free(given)) {
        take(out, hypdr_apply(given, lookup));
    } else if (skolem_headed(given)) {
        const Rule* self = &entries_[id].clause;
        for (ClauseId w : body_unifiable(given.head))
            if (is_skolem_free(entries_[w].clause))
                take(out, hypdr_apply(entries_[w].clause, lookup, self));
    }
    return out;
}

void validate_input(std::span<const Tgd> sigma)
{
    for (const auto& t : sigma) {
        if (t.body.empty())
            throw SaturationError("dependency with empty body: " + to_string(t));
        if (t.head.empty())
            throw SaturationError("dependency with empty head: " + to_string(t));
        if (!is_guarded(t))
            throw SaturationError("dependency is not guarded: " + to_string(t));
        for (const auto* part : {&t.body, &t.head})
            for (const auto& a : *part)
                for (const auto& term : a.args)
                    if (!term.is_variable() && !term.is_constant())
                        throw SaturationError("dependency contains a function or null term: " + to_string(t));
    }
}

} // namespace

SaturationResult saturate(std::span<const Tgd> sigma, const SaturationOptions& opts)
{
    validate_input(sigma);
    std::vector<Tgd> hnf = head_normal_form(sigma);
    SignatureStats sig = signature_stats(hnf);
    std::set<Symbol> body_relations = signature_stats(sigma).body_relations();
    SaturationResult result;

    switch (opts.algorithm) {
    case Algorithm::ExbDR:
    case Algorithm::FullDR: {
        if (opts.algorithm == Algorithm::FullDR && sig.max_head_width + sig.constants.size() > opts.fulldr_max_range)
            throw SaturationError("FullDR needs " + std::to_string(sig.max_head_width + sig.constants.size()) +
                                  " fresh variables, above the configured cap of " +
                                  std::to_string(opts.fulldr_max_range));
        Saturator<Tgd> s(opts, sig, body_relations);
        for (const auto& t : hnf)
            s.add_input(t);
        s.run();
        result.program = s.program();
        result.stats = s.stats();
        result.worked_off_tgds = s.worked_off();
        break;
    }
    case Algorithm::SkDR:
    case Algorithm::HypDR: {
        Saturator<Rule> s(opts, sig, body_relations);
        for (const auto& r : skolemize(hnf))
            s.add_input(r);
        s.run();
        result.program = s.program();
        result.stats = s.stats();
        result.worked_off_rules = s.worked_off();
        break;
    }
    }
    return result;
}

} // namespace gtgd
