#pragma once

#include "gtgd/substitution.hpp"
#include "gtgd/term.hpp"

#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gtgd {

// body -> exists y. head, with y the head variables missing from the body.
struct Tgd {
    std::vector<Atom> body;
    std::vector<Atom> head;

    friend bool operator==(const Tgd&, const Tgd&) = default;
};

// Single-head implication; terms may contain Skolem function symbols.
struct Rule {
    std::vector<Atom> body;
    Atom head;

    friend bool operator==(const Rule&, const Rule&) = default;
};

using DatalogProgram = std::vector<Rule>;

// Thrown when an internal invariant of an algorithm is violated.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

#define GTGD_CHECK(cond, msg)                                                              \
    do {                                                                                   \
        if (!(cond))                                                                       \
            throw ::gtgd::InvariantViolation(std::string(msg) + " (" #cond ")");          \
    } while (false)

inline std::span<const Atom> head_atoms(const Tgd& t) { return t.head; }
inline std::span<const Atom> head_atoms(const Rule& r) { return {&r.head, 1}; }

VarSet universal_vars(const Tgd& t);
VarSet existential_vars(const Tgd& t);
VarSet all_vars(const Rule& r);
bool is_full(const Tgd& t);
bool is_single_head(const Tgd& t);
bool is_head_normal(const Tgd& t);
bool is_skolem_free(const Rule& r);
bool is_datalog(const Rule& r);

std::size_t body_width(const Tgd& t);
std::size_t head_width(const Tgd& t);

std::vector<Tgd> head_normal_form(const Tgd& t);
std::vector<Tgd> head_normal_form(std::span<const Tgd> sigma);

// Body atoms containing every body variable.
std::vector<std::size_t> find_guards(const Tgd& t);
bool is_guarded(const Tgd& t);
// Some Skolem-free body atom holds all variables of the rule, and every
// Skolem term f(t) has function-free arguments and mentions all variables.
bool is_guarded_rule(const Rule& r);
// Body atoms of a Skolem-free rule that hold all of its variables.
std::vector<std::size_t> find_guards(const Rule& r);

// Variables renamed to X1.. / Y1.., atoms sorted, duplicate atoms removed.
// The result does not depend on the original variable names or atom order.
Tgd normalize(const Tgd& t);
Rule normalize(const Rule& r);

// Text form; applied to normalized input it is the identity key of a clause.
std::string to_string(const Tgd& t);
std::string to_string(const Rule& r);
std::ostream& operator<<(std::ostream& os, const Tgd& t);
std::ostream& operator<<(std::ostream& os, const Rule& r);

bool is_syntactic_tautology(const Tgd& t);
bool is_syntactic_tautology(const Rule& r);

// Syntactic inclusion on normalized clauses.
bool subsumes_approx(const Tgd& a, const Tgd& b);
bool subsumes_approx(const Rule& a, const Rule& b);

// Skolemization of head-normal TGDs.  Symbols are named after the position
// of the TGD in normalized order and the existential variable.
std::vector<Rule> skolemize(std::span<const Tgd> sigma);

// A full single-head TGD as a rule and back.
Rule to_rule(const Tgd& t);
Tgd to_tgd(const Rule& r);

// Fresh-variable renaming for premises.
class VarRenamer {
public:
    explicit VarRenamer(VarId start = kScratchBase) : next_(start) {}
    Tgd rename(const Tgd& t);
    Rule rename(const Rule& r);
    Substitution fresh_for(const VarSet& vars);
    VarId fresh() { return next_++; }

private:
    VarId next_;
};

// Terms of one fact cover `terms` apart from the allowed constants.
bool covers(const Atom& fact, std::span<const Term> terms, const std::set<Term>& constants);

struct SignatureStats {
    std::map<Symbol, std::size_t> arity;
    std::map<Symbol, std::size_t> body_occurrences;
    std::map<Symbol, std::size_t> head_occurrences;
    std::set<Term> constants;
    std::size_t max_body_width = 0;
    std::size_t max_head_width = 0;
    std::size_t existential_count = 0;

    std::set<Symbol> body_relations() const;
};

SignatureStats signature_stats(std::span<const Tgd> sigma);

void collect_constants(const Atom& a, std::set<Term>& out);
std::set<Term> constants_of(std::span<const Atom> atoms);

} // namespace gtgd
