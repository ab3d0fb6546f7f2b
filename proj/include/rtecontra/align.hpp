#pragma once

// Iterated Smith-Waterman local alignment over token sequences.
//
// The score function rewards an exact token match with +1 and resets the
// score to 0 on any insertion, deletion or substitution, so H[i][j] is the
// length of the common run of tokens ending at x[i-1] and y[j-1]. The matrix
// is filled once; then, while its maximum is at least the threshold, the path
// leading to the maximum is traced back diagonally until a zero cell, the
// collected substring pair is recorded and the traversed cells are zeroed.
// Only traversed cells are zeroed by default, so a token may take part in
// several pairs (crossing alignments).

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace rtecontra {

/// (n+1) x (m+1) alignment score matrix; row 0 and column 0 are zero.
class ScoreMatrix {
public:
    ScoreMatrix() = default;
    ScoreMatrix(std::size_t n, std::size_t m) : rows_(n + 1), cols_(m + 1), cells_(rows_ * cols_, 0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    int operator()(std::size_t i, std::size_t j) const noexcept { return cells_[i * cols_ + j]; }
    int& operator()(std::size_t i, std::size_t j) noexcept { return cells_[i * cols_ + j]; }

    int max() const noexcept { return cells_.empty() ? 0 : *std::max_element(cells_.begin(), cells_.end()); }

    void reset(std::size_t n, std::size_t m) {
        rows_ = n + 1;
        cols_ = m + 1;
        cells_.assign(rows_ * cols_, 0);
    }

private:
    std::size_t rows_ = 1;
    std::size_t cols_ = 1;
    std::vector<int> cells_ = std::vector<int>(1, 0);
};

template <class T>
void fill_matrix(std::span<const T> x, std::span<const T> y, ScoreMatrix& h) {
    h.reset(x.size(), y.size());
    for (std::size_t i = 1; i <= x.size(); ++i)
        for (std::size_t j = 1; j <= y.size(); ++j)
            h(i, j) = x[i - 1] == y[j - 1] ? h(i - 1, j - 1) + 1 : 0;
}

template <class T>
ScoreMatrix build_matrix(std::span<const T> x, std::span<const T> y) {
    ScoreMatrix h;
    fill_matrix(x, y, h);
    return h;
}

struct AlignedSubstring {
    std::size_t start_x;
    std::size_t start_y;
    std::size_t length;

    friend bool operator==(const AlignedSubstring&, const AlignedSubstring&) = default;
};

struct AlignmentResult {
    std::vector<AlignedSubstring> pairs;  // in extraction order
    std::vector<std::size_t> covered_x;   // sorted distinct token positions
    std::vector<std::size_t> covered_y;

    std::size_t m_x() const noexcept { return covered_x.size(); }
    std::size_t m_y() const noexcept { return covered_y.size(); }

    void clear() noexcept {
        pairs.clear();
        covered_x.clear();
        covered_y.clear();
    }
};

struct AlignOptions {
    /// Minimum length of an aligned substring.
    int min_length = 1;
    /// Zero the whole row and column of every traversed cell (no crossing
    /// alignments).
    bool zero_rows_and_columns = false;
    /// Stop after the first extracted substring (plain longest common
    /// substring).
    bool first_only = false;
};

/// Reusable buffers for iterative_align; lets hot loops avoid reallocating.
struct AlignWorkspace {
    struct Cell {
        int value;
        unsigned i;
        unsigned j;
    };
    ScoreMatrix h;
    std::vector<Cell> order;
    std::vector<std::size_t> bucket;
    std::vector<AlignedSubstring> runs;
    std::vector<char> hit_x;
    std::vector<char> hit_y;
};

namespace detail {

inline void mark_coverage(std::size_t n, std::size_t m, AlignWorkspace& ws, AlignmentResult& out) {
    ws.hit_x.assign(n, 0);
    ws.hit_y.assign(m, 0);
    for (const auto& p : out.pairs)
        for (std::size_t k = 0; k < p.length; ++k) {
            ws.hit_x[p.start_x + k] = 1;
            ws.hit_y[p.start_y + k] = 1;
        }
    for (std::size_t k = 0; k < n; ++k)
        if (ws.hit_x[k]) out.covered_x.push_back(k);
    for (std::size_t k = 0; k < m; ++k)
        if (ws.hit_y[k]) out.covered_y.push_back(k);
}

/// Extraction by repeated maximum search and traceback over the score matrix.
template <class T>
void traceback_align(std::span<const T> x, std::span<const T> y, const AlignOptions& opts, AlignWorkspace& ws,
                     AlignmentResult& out) {
    out.clear();
    fill_matrix(x, y, ws.h);
    auto& h = ws.h;

    // Cell values only ever drop to zero, so the current maximum is the first
    // still-positive cell in (value desc, row asc, column asc) order. A
    // row-major counting sort by value yields exactly that order.
    const auto top = static_cast<std::size_t>(std::min(x.size(), y.size()));
    ws.bucket.assign(top + 2, 0);
    for (std::size_t i = 1; i <= x.size(); ++i)
        for (std::size_t j = 1; j <= y.size(); ++j)
            if (const int v = h(i, j); v > 0) ++ws.bucket[top - static_cast<std::size_t>(v) + 1];
    for (std::size_t b = 1; b < ws.bucket.size(); ++b) ws.bucket[b] += ws.bucket[b - 1];
    ws.order.resize(ws.bucket.back());
    for (std::size_t i = 1; i <= x.size(); ++i)
        for (std::size_t j = 1; j <= y.size(); ++j)
            if (const int v = h(i, j); v > 0)
                ws.order[ws.bucket[top - static_cast<std::size_t>(v)]++] = {v, static_cast<unsigned>(i), static_cast<unsigned>(j)};

    for (const auto& cell : ws.order) {
        if (h(cell.i, cell.j) == 0) continue;
        if (cell.value < opts.min_length) break;

        std::size_t i = cell.i;
        std::size_t j = cell.j;
        std::size_t len = 0;
        while (i > 0 && j > 0 && h(i, j) > 0) {
            h(i, j) = 0;
            if (opts.zero_rows_and_columns) {
                for (std::size_t c = 0; c < h.cols(); ++c) h(i, c) = 0;
                for (std::size_t r = 0; r < h.rows(); ++r) h(r, j) = 0;
            }
            --i;
            --j;
            ++len;
        }
        // Without row/column zeroing the traceback always consumes the whole
        // run, so len == cell.value; with it a run can be cut short.
        if (static_cast<int>(len) >= opts.min_length) out.pairs.push_back({i, j, len});
        if (opts.first_only) break;
    }
    mark_coverage(x.size(), y.size(), ws, out);
}

/// Same result as traceback_align without row/column zeroing. Each traceback
/// then consumes one whole maximal diagonal run, so the extracted pairs are
/// the maximal common runs in (length desc, row asc, column asc) order, and
/// a single pass over the diagonals finds them.
template <class T>
void run_align(std::span<const T> x, std::span<const T> y, const AlignOptions& opts, AlignWorkspace& ws,
               AlignmentResult& out) {
    out.clear();
    const std::size_t n = x.size(), m = y.size();
    const auto min_len = static_cast<std::size_t>(opts.min_length);
    // A diagonal of length L holds at most (L + 1) / 2 runs, so n * m slots
    // always suffice. Every step writes a candidate and keeps it only at a
    // run end, which avoids a data-dependent branch per cell.
    ws.runs.resize(std::max<std::size_t>(n * m, 1));
    std::size_t count = 0;
    auto walk = [&](std::size_t i, std::size_t j) {
        std::size_t len = 0;
        for (; i < n && j < m; ++i, ++j) {
            const bool match = x[i] == y[j];
            ws.runs[count] = {i - len, j - len, len};
            count += static_cast<std::size_t>(!match & (len >= min_len));
            len = match ? len + 1 : 0;
        }
        if (len >= min_len) ws.runs[count++] = {i - len, j - len, len};
    };
    for (std::size_t i = 0; i < n; ++i) walk(i, 0);
    for (std::size_t j = 1; j < m; ++j) walk(0, j);
    out.pairs.assign(ws.runs.begin(), ws.runs.begin() + static_cast<std::ptrdiff_t>(count));
    // Insertion sort: run lists are short. Equal lengths order start cells
    // the same way as end cells.
    auto before = [](const AlignedSubstring& a, const AlignedSubstring& b) {
        if (a.length != b.length) return a.length > b.length;
        if (a.start_x != b.start_x) return a.start_x < b.start_x;
        return a.start_y < b.start_y;
    };
    auto& p = out.pairs;
    for (std::size_t k = 1; k < p.size(); ++k) {
        const auto v = p[k];
        std::size_t at = k;
        for (; at > 0 && before(v, p[at - 1]); --at) p[at] = p[at - 1];
        p[at] = v;
    }
    if (opts.first_only && out.pairs.size() > 1) out.pairs.resize(1);
    mark_coverage(n, m, ws, out);
}

}  // namespace detail

template <class T>
void iterative_align(std::span<const T> x, std::span<const T> y, const AlignOptions& opts,
                     AlignWorkspace& ws, AlignmentResult& out) {
    if (opts.min_length < 1) throw std::invalid_argument("alignment threshold must be >= 1");
    if (opts.zero_rows_and_columns) detail::traceback_align(x, y, opts, ws, out);
    else detail::run_align(x, y, opts, ws, out);
}

template <class T>
AlignmentResult iterative_align(std::span<const T> x, std::span<const T> y, const AlignOptions& opts = {}) {
    AlignWorkspace ws;
    AlignmentResult out;
    iterative_align(x, y, opts, ws, out);
    return out;
}

template <class T>
AlignmentResult iterative_align(const std::vector<T>& x, const std::vector<T>& y, const AlignOptions& opts = {}) {
    return iterative_align(std::span<const T>(x), std::span<const T>(y), opts);
}

}  // namespace rtecontra
