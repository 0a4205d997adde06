#pragma once

#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace pdvec {

/// Hopcroft-Karp maximum cardinality matching on a bipartite graph with
/// `left` and `right` vertex sets. O(E sqrt(V)).
class BipartiteMatcher {
public:
    static constexpr std::size_t nil = std::numeric_limits<std::size_t>::max();

    BipartiteMatcher(std::size_t left, std::size_t right) : adj_(left), right_(right) {}

    void add_edge(std::size_t l, std::size_t r) { adj_[l].push_back(r); }

    std::size_t left_size() const noexcept { return adj_.size(); }

    /// Size of a maximum matching. After the call, match_of_left(l) is the
    /// right partner of l or nil.
    std::size_t solve() {
        const std::size_t n = adj_.size();
        match_left_.assign(n, nil);
        match_right_.assign(right_, nil);
        dist_.assign(n, 0);
        std::size_t matched = 0;
        while (bfs())
            for (std::size_t l = 0; l < n; ++l)
                if (match_left_[l] == nil && dfs(l))
                    ++matched;
        return matched;
    }

    std::size_t match_of_left(std::size_t l) const { return match_left_[l]; }

private:
    static constexpr std::size_t inf = std::numeric_limits<std::size_t>::max();

    bool bfs() {
        std::queue<std::size_t> q;
        bool reachable_free = false;
        for (std::size_t l = 0; l < adj_.size(); ++l) {
            if (match_left_[l] == nil) {
                dist_[l] = 0;
                q.push(l);
            } else {
                dist_[l] = inf;
            }
        }
        while (!q.empty()) {
            const auto l = q.front();
            q.pop();
            for (auto r : adj_[l]) {
                const auto next = match_right_[r];
                if (next == nil) {
                    reachable_free = true;
                } else if (dist_[next] == inf) {
                    dist_[next] = dist_[l] + 1;
                    q.push(next);
                }
            }
        }
        return reachable_free;
    }

    bool dfs(std::size_t l) {
        for (auto r : adj_[l]) {
            const auto next = match_right_[r];
            if (next == nil || (dist_[next] == dist_[l] + 1 && dfs(next))) {
                match_left_[l] = r;
                match_right_[r] = l;
                return true;
            }
        }
        dist_[l] = inf;
        return false;
    }

    std::vector<std::vector<std::size_t>> adj_;
    std::size_t right_;
    std::vector<std::size_t> match_left_;
    std::vector<std::size_t> match_right_;
    std::vector<std::size_t> dist_;
};

}  // namespace pdvec
