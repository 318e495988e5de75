#include "agec/align.hpp"

#include <algorithm>

#include "agec/errors.hpp"

namespace agec {

AlignmentPath align(const Sentence& source, const Sentence& target) {
    const std::size_t n = source.size(), m = target.size();
    std::vector<std::size_t> dp((n + 1) * (m + 1), 0);
    auto at = [m](std::size_t i, std::size_t j) -> std::size_t { return i * (m + 1) + j; };

    for (std::size_t i = 0; i <= n; ++i) dp[at(i, 0)] = i;
    for (std::size_t j = 0; j <= m; ++j) dp[at(0, j)] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            std::size_t diag = dp[at(i - 1, j - 1)] + (source[i - 1] == target[j - 1] ? 0 : 1);
            std::size_t del = dp[at(i - 1, j)] + 1;
            std::size_t ins = dp[at(i, j - 1)] + 1;
            dp[at(i, j)] = std::min({diag, del, ins});
        }
    }

    AlignmentPath path;
    path.cost = dp[at(n, m)];
    path.ops.reserve(n + m);
    std::size_t i = n, j = m;
    while (i > 0 || j > 0) {
        const std::size_t here = dp[at(i, j)];
        if (i > 0 && j > 0 && source[i - 1] == target[j - 1] && here == dp[at(i - 1, j - 1)]) {
            path.ops.push_back({OpKind::Match, i - 1, j - 1});
            --i, --j;
        } else if (i > 0 && j > 0 && source[i - 1] != target[j - 1] &&
                   here == dp[at(i - 1, j - 1)] + 1) {
            path.ops.push_back({OpKind::Substitute, i - 1, j - 1});
            --i, --j;
        } else if (i > 0 && here == dp[at(i - 1, j)] + 1) {
            path.ops.push_back({OpKind::Delete, i - 1, std::nullopt});
            --i;
        } else {
            path.ops.push_back({OpKind::Insert, std::nullopt, j - 1});
            --j;
        }
    }
    std::reverse(path.ops.begin(), path.ops.end());
    return path;
}

namespace internal {

// A maximal run of non-Match ops, annotated with its source/target spans
// and the number of Match ops separating it from the previous run.
struct EditRun {
    std::size_t src_lo = 0, src_hi = 0;
    std::size_t tgt_lo = 0, tgt_hi = 0;
    std::size_t gap_before = 0;
};

std::vector<EditRun> collect_runs(const AlignmentPath& path) {
    std::vector<EditRun> runs;
    std::size_t src_cursor = 0, tgt_cursor = 0;
    std::size_t gap = 0;
    bool in_run = false;
    for (const AlignmentOp& op : path.ops) {
        if (op.kind == OpKind::Match) {
            ++gap;
            in_run = false;
            ++src_cursor, ++tgt_cursor;
            continue;
        }
        if (!in_run) {
            EditRun r;
            r.src_lo = r.src_hi = src_cursor;
            r.tgt_lo = r.tgt_hi = tgt_cursor;
            r.gap_before = runs.empty() ? 0 : gap;
            runs.push_back(r);
            gap = 0;
            in_run = true;
        }
        EditRun& r = runs.back();
        switch (op.kind) {
            case OpKind::Substitute:
                ++src_cursor, ++tgt_cursor;
                break;
            case OpKind::Delete:
                ++src_cursor;
                break;
            case OpKind::Insert:
                ++tgt_cursor;
                break;
            case OpKind::Match:
                break;
        }
        r.src_hi = src_cursor;
        r.tgt_hi = tgt_cursor;
    }
    return runs;
}

}  // namespace internal

std::vector<Edit> extract_edits(const AlignmentPath& path, const Sentence& target,
                                std::size_t max_gap) {
    const auto runs = internal::collect_runs(path);
    std::vector<Edit> out;
    auto emit = [&](std::size_t lo, std::size_t hi) {
        const auto& a = runs[lo];
        const auto& b = runs[hi];
        Edit e;
        e.start = a.src_lo;
        e.end = b.src_hi;
        if (b.tgt_hi > target.size()) throw contract_error("path inconsistent with target");
        e.replacement.assign(target.begin() + static_cast<std::ptrdiff_t>(a.tgt_lo),
                             target.begin() + static_cast<std::ptrdiff_t>(b.tgt_hi));
        out.push_back(std::move(e));
    };

    for (std::size_t i = 0; i < runs.size(); ++i) {
        emit(i, i);
        for (std::size_t j = i + 1; j < runs.size(); ++j) {
            if (runs[j].gap_before > max_gap) break;
            emit(i, j);
        }
    }
    std::sort(out.begin(), out.end(), [](const Edit& x, const Edit& y) {
        if (x.start != y.start) return x.start < y.start;
        return x.end < y.end;
    });
    return out;
}

}  // namespace agec
