// Exhaustive branching of the greedy algorithm. This is the brute-force
// counterpart of verify_greedy and deliberately shares none of its code.

#include <algorithm>
#include <set>

#include "gsr/error.hpp"
#include "gsr/exchange.hpp"
#include "gsr/sequencing.hpp"

namespace gsr {

namespace {

struct Search {
    Potential pot;
    PoolState x0;
    const Block& block;
    GreedyOptions opts;
    std::set<std::vector<std::size_t>> found;

    void finish_all_orders(std::vector<std::size_t>& prefix, std::vector<std::size_t> rest) {
        std::sort(rest.begin(), rest.end());
        do {
            std::vector<std::size_t> full = prefix;
            full.insert(full.end(), rest.begin(), rest.end());
            found.insert(std::move(full));
        } while (std::next_permutation(rest.begin(), rest.end()));
    }

    void branch(std::vector<std::size_t>& prefix, std::vector<std::size_t>& buys,
                std::vector<std::size_t>& sells, PoolState state) {
        if (buys.empty() || sells.empty()) {
            finish_all_orders(prefix, buys.empty() ? sells : buys);
            return;
        }
        const double diff = state.x1 - x0.x1;
        const bool tie = opts.origin_eps > 0.0 ? (diff <= opts.origin_eps && diff >= -opts.origin_eps)
                                               : diff == 0.0;
        const bool may_buy = tie || diff > 0.0;
        const bool may_sell = tie ? opts.origin_tie == OriginTie::EitherSide : diff < 0.0;
        if (may_buy) take_each(prefix, buys, buys, sells, state);
        if (may_sell) take_each(prefix, sells, buys, sells, state);
    }

    void take_each(std::vector<std::size_t>& prefix, std::vector<std::size_t>& from,
                   std::vector<std::size_t>& buys, std::vector<std::size_t>& sells, PoolState state) {
        for (std::size_t k = 0; k < from.size(); ++k) {
            const std::size_t index = from[k];
            from.erase(from.begin() + static_cast<std::ptrdiff_t>(k));
            prefix.push_back(index);
            branch(prefix, buys, sells, execute_order(pot, state, block.order(index)).next);
            prefix.pop_back();
            from.insert(from.begin() + static_cast<std::ptrdiff_t>(k), index);
        }
    }
};

}  // namespace

std::vector<ExecutionOrdering> reachable_greedy_orderings(Potential pot, PoolState x0,
                                                          const Block& block, std::size_t max_orders,
                                                          const GreedyOptions& opts) {
    if (block.size() > max_orders) {
        throw Error(ErrorCode::TooLarge, "block too large for exhaustive enumeration");
    }
    std::vector<std::size_t> buys;
    std::vector<std::size_t> sells;
    for (std::size_t i = 0; i < block.size(); ++i) {
        (block.order(i).is_buy() ? buys : sells).push_back(i);
    }
    Search search{pot, x0, block, opts, {}};
    std::vector<std::size_t> prefix;
    search.branch(prefix, buys, sells, x0);

    std::vector<ExecutionOrdering> out;
    out.reserve(search.found.size());
    for (const auto& seq : search.found) out.emplace_back(seq);
    return out;
}

}  // namespace gsr
