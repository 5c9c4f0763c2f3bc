#pragma once

#include "gtgd/dependency.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

namespace gtgd {

using ClauseId = std::uint32_t;

enum class Polarity : std::uint8_t { Body, Head };

struct PolarizedSymbol {
    Symbol relation;
    Polarity polarity;
    friend bool operator==(const PolarizedSymbol&, const PolarizedSymbol&) = default;
};

// Relation symbols grouped into clusters per polarity.  Feature symbols are
// numbered so that every body cluster precedes every head cluster.
class ClusterMap {
public:
    // k clusters per polarity (fewer if a polarity has fewer symbols).  k = 0
    // picks ceil(sqrt(#relations)) clamped to [1, 64].
    static ClusterMap compute(const SignatureStats& stats, std::size_t k = 0);

    // Polarized relations: body before head, then descending frequency, then name.
    const std::vector<PolarizedSymbol>& symbol_order() const { return order_; }
    std::uint32_t feature(Symbol relation, Polarity p) const;
    std::uint32_t body_cluster_count() const { return body_clusters_; }
    std::uint32_t head_cluster_count() const { return head_clusters_; }

private:
    std::vector<PolarizedSymbol> order_;
    std::map<Symbol, std::uint32_t> body_, head_;
    std::uint32_t body_clusters_ = 1;
    std::uint32_t head_clusters_ = 1;
};

// Sorted feature ids of a clause; ids below `boundary` are body features.
struct FeatureVector {
    std::vector<std::uint32_t> features;
    std::uint32_t boundary = 0;
    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

FeatureVector feature_vector(const Tgd& t, const ClusterMap& m);
FeatureVector feature_vector(const Rule& r, const ClusterMap& m);

enum class SubsumptionQuery : std::uint8_t {
    // entries e with e.body ⊆ q.body and e.head ⊇ q.head
    Subsuming,
    // entries e with e.body ⊇ q.body and e.head ⊆ q.head
    Subsumed,
};

// Set-trie over feature vectors.
class SetTrie {
public:
    SetTrie();
    ~SetTrie();
    SetTrie(SetTrie&&) noexcept;
    SetTrie& operator=(SetTrie&&) noexcept;

    void insert(ClauseId id, const FeatureVector& fv);
    // No-op if the id is not stored under fv.
    void remove(ClauseId id, const FeatureVector& fv);
    std::vector<ClauseId> query(const FeatureVector& fv, SubsumptionQuery mode) const;
    std::size_t size() const { return size_; }

private:
    struct Node;
    std::unique_ptr<Node> root_;
    std::size_t size_ = 0;
};

// Relation-keyed candidate lookup for TGDs.
class RelationIndex {
public:
    void insert(ClauseId id, const Tgd& t);
    void remove(ClauseId id, const Tgd& t);
    std::vector<ClauseId> with_body_relation(Symbol r) const;
    std::vector<ClauseId> with_head_relation(Symbol r) const;

private:
    std::unordered_map<std::uint32_t, std::set<ClauseId>> body_, head_;
};

// Trie over flattened atoms (relation, then arguments in preorder; variables
// become wildcards).  Retrieval of unifiable atoms may return extra ids but
// never misses one.
class PathIndex {
public:
    PathIndex();
    ~PathIndex();
    PathIndex(PathIndex&&) noexcept;
    PathIndex& operator=(PathIndex&&) noexcept;

    void insert(ClauseId id, const Atom& a);
    void remove(ClauseId id, const Atom& a);
    std::vector<ClauseId> unifiable(const Atom& probe) const;

private:
    struct Node;
    std::unique_ptr<Node> root_;
};

// Body and head path indexes for rules.
class RuleIndex {
public:
    void insert(ClauseId id, const Rule& r);
    void remove(ClauseId id, const Rule& r);
    // Rules with a body atom that may unify with `a`.
    std::vector<ClauseId> body_unifiable(const Atom& a) const { return body_.unifiable(a); }
    // Rules whose head may unify with `a`.
    std::vector<ClauseId> head_unifiable(const Atom& a) const { return head_.unifiable(a); }

private:
    PathIndex body_, head_;
};

} // namespace gtgd
