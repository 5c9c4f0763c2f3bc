#include "gtgd/indexing.hpp"

#include <algorithm>
#include <cmath>

namespace gtgd {

ClusterMap ClusterMap::compute(const SignatureStats& stats, std::size_t k)
{
    ClusterMap m;
    if (k == 0) {
        auto n = static_cast<double>(stats.arity.size());
        k = static_cast<std::size_t>(std::ceil(std::sqrt(n)));
        k = std::clamp<std::size_t>(k, 1, 64);
    }

    auto ranked = [](const std::map<Symbol, std::size_t>& occ) {
        std::vector<std::pair<Symbol, std::size_t>> v(occ.begin(), occ.end());
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second)
                return a.second > b.second;
            return a.first.name() < b.first.name();
        });
        return v;
    };
    auto body = ranked(stats.body_occurrences);
    auto head = ranked(stats.head_occurrences);
    for (const auto& [s, n] : body)
        m.order_.push_back({s, Polarity::Body});
    for (const auto& [s, n] : head)
        m.order_.push_back({s, Polarity::Head});

    // Greedy balancing: each symbol, most frequent first, joins the cluster
    // with the smallest total so far (lowest index on ties).
    auto assign = [k](const std::vector<std::pair<Symbol, std::size_t>>& syms, std::map<Symbol, std::uint32_t>& out) {
        std::size_t count = std::max<std::size_t>(1, std::min(k, syms.size()));
        std::vector<std::size_t> load(count, 0);
        for (const auto& [s, n] : syms) {
            auto it = std::min_element(load.begin(), load.end());
            auto c = static_cast<std::uint32_t>(it - load.begin());
            *it += n;
            out[s] = c;
        }
        return static_cast<std::uint32_t>(count);
    };
    m.body_clusters_ = assign(body, m.body_);
    m.head_clusters_ = assign(head, m.head_);
    return m;
}

std::uint32_t ClusterMap::feature(Symbol relation, Polarity p) const
{
    if (p == Polarity::Body) {
        auto it = body_.find(relation);
        return it == body_.end() ? 0 : it->second;
    }
    auto it = head_.find(relation);
    return body_clusters_ + (it == head_.end() ? 0 : it->second);
}

namespace {

FeatureVector make_fv(std::span<const Atom> body, std::span<const Atom> head, const ClusterMap& m)
{
    FeatureVector fv;
    fv.boundary = m.body_cluster_count();
    for (const auto& a : body)
        fv.features.push_back(m.feature(a.relation, Polarity::Body));
    for (const auto& a : head)
        fv.features.push_back(m.feature(a.relation, Polarity::Head));
    std::sort(fv.features.begin(), fv.features.end());
    fv.features.erase(std::unique(fv.features.begin(), fv.features.end()), fv.features.end());
    return fv;
}

} // namespace

FeatureVector feature_vector(const Tgd& t, const ClusterMap& m)
{
    return make_fv(t.body, t.head, m);
}

FeatureVector feature_vector(const Rule& r, const ClusterMap& m)
{
    return make_fv(r.body, head_atoms(r), m);
}

struct SetTrie::Node {
    std::map<std::uint32_t, std::unique_ptr<Node>> children;
    std::set<ClauseId> ids;
};

SetTrie::SetTrie() : root_(std::make_unique<Node>()) {}
SetTrie::~SetTrie() = default;
SetTrie::SetTrie(SetTrie&&) noexcept = default;
SetTrie& SetTrie::operator=(SetTrie&&) noexcept = default;

void SetTrie::insert(ClauseId id, const FeatureVector& fv)
{
    Node* n = root_.get();
    for (auto f : fv.features) {
        auto& c = n->children[f];
        if (!c)
            c = std::make_unique<Node>();
        n = c.get();
    }
    if (n->ids.insert(id).second)
        ++size_;
}

void SetTrie::remove(ClauseId id, const FeatureVector& fv)
{
    std::vector<Node*> path{root_.get()};
    for (auto f : fv.features) {
        auto it = path.back()->children.find(f);
        if (it == path.back()->children.end())
            return;
        path.push_back(it->second.get());
    }
    if (path.back()->ids.erase(id) == 0)
        return;
    --size_;
    for (std::size_t i = fv.features.size(); i > 0; --i) {
        Node* n = path[i];
        if (!n->ids.empty() || !n->children.empty())
            break;
        path[i - 1]->children.erase(fv.features[i - 1]);
    }
}

std::vector<ClauseId> SetTrie::query(const FeatureVector& fv, SubsumptionQuery mode) const
{
    // Feature f is required (entry must hold it), forbidden, or optional.
    std::vector<std::uint32_t> required;
    for (auto f : fv.features) {
        bool body = f < fv.boundary;
        if ((mode == SubsumptionQuery::Subsuming) != body)
            required.push_back(f);
    }
    auto in_query = [&](std::uint32_t f) { return std::binary_search(fv.features.begin(), fv.features.end(), f); };
    auto forbidden = [&](std::uint32_t f) {
        bool body = f < fv.boundary;
        if (mode == SubsumptionQuery::Subsuming)
            return body && !in_query(f);
        return !body && !in_query(f);
    };

    std::vector<ClauseId> out;
    auto rec = [&](auto& self, const Node* n, std::size_t r) -> void {
        if (r == required.size())
            out.insert(out.end(), n->ids.begin(), n->ids.end());
        for (const auto& [f, child] : n->children) {
            if (r < required.size() && f > required[r])
                break;
            if (forbidden(f))
                continue;
            self(self, child.get(), (r < required.size() && f == required[r]) ? r + 1 : r);
        }
    };
    rec(rec, root_.get(), 0);
    std::sort(out.begin(), out.end());
    return out;
}

void RelationIndex::insert(ClauseId id, const Tgd& t)
{
    for (const auto& a : t.body)
        body_[a.relation.id()].insert(id);
    for (const auto& a : t.head)
        head_[a.relation.id()].insert(id);
}

void RelationIndex::remove(ClauseId id, const Tgd& t)
{
    for (const auto& a : t.body)
        if (auto it = body_.find(a.relation.id()); it != body_.end())
            it->second.erase(id);
    for (const auto& a : t.head)
        if (auto it = head_.find(a.relation.id()); it != head_.end())
            it->second.erase(id);
}

std::vector<ClauseId> RelationIndex::with_body_relation(Symbol r) const
{
    auto it = body_.find(r.id());
    if (it == body_.end())
        return {};
    return {it->second.begin(), it->second.end()};
}

std::vector<ClauseId> RelationIndex::with_head_relation(Symbol r) const
{
    auto it = head_.find(r.id());
    if (it == head_.end())
        return {};
    return {it->second.begin(), it->second.end()};
}

namespace {

struct Token {
    enum Kind : std::uint8_t { Relation, Wildcard, Constant, Function, Null } kind;
    std::uint32_t symbol = 0;
    std::uint32_t arity = 0;
    friend auto operator<=>(const Token&, const Token&) = default;
};

void flatten(const Term& t, std::vector<Token>& out)
{
    switch (t.kind()) {
    case TermKind::Variable:
        out.push_back({Token::Wildcard, 0, 0});
        return;
    case TermKind::Constant:
        out.push_back({Token::Constant, t.symbol().id(), 0});
        return;
    case TermKind::Null:
        out.push_back({Token::Null, t.index(), 0});
        return;
    case TermKind::Function:
        out.push_back({Token::Function, t.symbol().id(), static_cast<std::uint32_t>(t.args().size())});
        for (const auto& a : t.args())
            flatten(a, out);
        return;
    }
}

std::vector<Token> flatten(const Atom& a)
{
    std::vector<Token> out{{Token::Relation, a.relation.id(), static_cast<std::uint32_t>(a.args.size())}};
    for (const auto& t : a.args)
        flatten(t, out);
    return out;
}

// End (exclusive) of the subterm starting at position i.
std::size_t subterm_end(const std::vector<Token>& toks, std::size_t i)
{
    std::size_t pending = 1;
    while (pending > 0) {
        pending += toks[i].kind == Token::Function ? toks[i].arity : 0;
        --pending;
        ++i;
    }
    return i;
}

} // namespace

struct PathIndex::Node {
    std::map<Token, std::unique_ptr<Node>> children;
    std::map<ClauseId, std::size_t> ids; // id -> number of atoms stored here
};

PathIndex::PathIndex() : root_(std::make_unique<Node>()) {}
PathIndex::~PathIndex() = default;
PathIndex::PathIndex(PathIndex&&) noexcept = default;
PathIndex& PathIndex::operator=(PathIndex&&) noexcept = default;

void PathIndex::insert(ClauseId id, const Atom& a)
{
    Node* n = root_.get();
    for (const auto& t : flatten(a)) {
        auto& c = n->children[t];
        if (!c)
            c = std::make_unique<Node>();
        n = c.get();
    }
    ++n->ids[id];
}

void PathIndex::remove(ClauseId id, const Atom& a)
{
    auto toks = flatten(a);
    std::vector<Node*> path{root_.get()};
    for (const auto& t : toks) {
        auto it = path.back()->children.find(t);
        if (it == path.back()->children.end())
            return;
        path.push_back(it->second.get());
    }
    auto it = path.back()->ids.find(id);
    if (it == path.back()->ids.end())
        return;
    if (--it->second == 0)
        path.back()->ids.erase(it);
    for (std::size_t i = toks.size(); i > 0; --i) {
        Node* n = path[i];
        if (!n->ids.empty() || !n->children.empty())
            break;
        path[i - 1]->children.erase(toks[i - 1]);
    }
}

std::vector<ClauseId> PathIndex::unifiable(const Atom& probe) const
{
    auto toks = flatten(probe);
    std::set<ClauseId> out;

    // Nodes reached from n by consuming `count` complete stored subterms.
    auto skip = [](auto& self, const Node* n, std::size_t count, std::vector<const Node*>& dst) -> void {
        if (count == 0) {
            dst.push_back(n);
            return;
        }
        for (const auto& [t, c] : n->children) {
            std::size_t extra = t.kind == Token::Function ? t.arity : 0;
            self(self, c.get(), count - 1 + extra, dst);
        }
    };

    auto rec = [&](auto& self, const Node* n, std::size_t i) -> void {
        if (i == toks.size()) {
            for (const auto& [id, k] : n->ids)
                out.insert(id);
            return;
        }
        const Token& p = toks[i];
        if (p.kind == Token::Wildcard) {
            std::vector<const Node*> next;
            skip(skip, n, 1, next);
            for (const Node* m : next)
                self(self, m, i + 1);
            return;
        }
        if (p.kind != Token::Relation) {
            auto w = n->children.find(Token{Token::Wildcard, 0, 0});
            if (w != n->children.end())
                self(self, w->second.get(), subterm_end(toks, i));
        }
        auto it = n->children.find(p);
        if (it != n->children.end())
            self(self, it->second.get(), i + 1);
    };
    rec(rec, root_.get(), 0);
    return {out.begin(), out.end()};
}

void RuleIndex::insert(ClauseId id, const Rule& r)
{
    for (const auto& a : r.body)
        body_.insert(id, a);
    head_.insert(id, r.head);
}

void RuleIndex::remove(ClauseId id, const Rule& r)
{
    for (const auto& a : r.body)
        body_.remove(id, a);
    head_.remove(id, r.head);
}

} // namespace gtgd
