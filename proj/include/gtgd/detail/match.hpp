#pragma once

namespace gtgd {

namespace detail {

template <class F>
void match_from(std::span<const Atom> body, std::size_t i, const Instance& facts, Substitution& theta, F& f)
{
    if (i == body.size()) {
        f(static_cast<const Substitution&>(theta));
        return;
    }
    const Atom& pattern = body[i];
    // Facts are ordered by relation first, so the candidates form a range.
    Atom lo{pattern.relation, {}};
    for (auto it = facts.lower_bound(lo); it != facts.end() && it->relation == pattern.relation; ++it) {
        if (it->args.size() != pattern.args.size())
            continue;
        Substitution saved = theta;
        if (match(pattern, *it, theta))
            match_from(body, i + 1, facts, theta, f);
        theta = std::move(saved);
    }
}

} // namespace detail

template <class F>
void for_each_match(std::span<const Atom> body, const Instance& facts, Substitution& theta, F&& f)
{
    detail::match_from(body, 0, facts, theta, f);
}

} // namespace gtgd
