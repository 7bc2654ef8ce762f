#pragma once

#include <string_view>

#include "umpvote/rank_core.hpp"

namespace testutil {

// "bac" -> [b>a>c]; letters index alternatives from 'a'.
inline umpvote::Ranking R(std::string_view s) {
    std::vector<umpvote::AltId> order;
    for (char c : s) order.push_back(c - 'a');
    return umpvote::Ranking(std::move(order));
}

// Relation over m alternatives from pairs written "ab ca bc" (x>y per token).
inline umpvote::BinaryRelation Rel(int m, std::string_view pairs) {
    umpvote::BinaryRelation r(m, 0);
    for (std::size_t i = 0; i + 1 < pairs.size(); i += 3) r = r.with(pairs[i] - 'a', pairs[i + 1] - 'a');
    return r;
}

inline umpvote::Profile p7() {
    using umpvote::Ballot;
    return umpvote::Profile(umpvote::AlternativeSet::lettered(3),
                            {{Ballot{R("abc")}, 3}, {Ballot{R("bca")}, 3}, {Ballot{R("acb")}, 1}});
}

}  // namespace testutil
