#include "coachsim/parity_check.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace coachsim {

namespace {

bool is_prime(int q) {
    if (q < 2) return false;
    for (int d = 2; static_cast<long long>(d) * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

// Dense GF(2) row for elimination, packed into 64-bit words.
struct BitRow {
    std::vector<std::uint64_t> w;
    explicit BitRow(int ncols) : w((static_cast<size_t>(ncols) + 63) / 64, 0) {}
    void set(int col0) { w[static_cast<size_t>(col0) >> 6] |= 1ULL << (col0 & 63); }
    bool get(int col0) const { return (w[static_cast<size_t>(col0) >> 6] >> (col0 & 63)) & 1ULL; }
    void operator^=(const BitRow& o) {
        for (size_t i = 0; i < w.size(); ++i) w[i] ^= o.w[i];
    }
};

}  // namespace

void ArrayCodeSpec::validate() const {
    if (!is_prime(q)) throw std::invalid_argument("array code: q must be prime");
    if (j < 1) throw std::invalid_argument("array code: j must be >= 1");
    if (j >= kk) throw std::invalid_argument("array code: j must be < kk");
    if (kk > q) throw std::invalid_argument("array code: kk must be <= q");
}

ParityCheckMatrix::ParityCheckMatrix(int n, std::vector<std::vector<int>> rows)
    : n_(n), rows_(std::move(rows)) {
    if (n_ < 1) throw std::invalid_argument("parity check: n must be >= 1");
    for (const auto& r : rows_) {
        if (r.empty()) throw std::invalid_argument("parity check: empty row");
        int prev = 0;
        for (int c : r) {
            if (c < 1 || c > n_) throw std::invalid_argument("parity check: column index out of range");
            if (c <= prev) throw std::invalid_argument("parity check: row indices must be strictly ascending");
            prev = c;
        }
    }
    col_rows_.assign(static_cast<size_t>(n_) + 1, {});
    for (size_t r = 0; r < rows_.size(); ++r)
        for (int c : rows_[r]) col_rows_[static_cast<size_t>(c)].push_back(static_cast<int>(r));
    eliminate();
    if (k() < 1) throw std::invalid_argument("parity check: rank leaves no information symbols");
}

void ParityCheckMatrix::eliminate() {
    const int m = row_count();
    std::vector<BitRow> work;
    work.reserve(static_cast<size_t>(m));
    for (int r = 0; r < m; ++r) {
        BitRow br(n_);
        for (int c : rows_[static_cast<size_t>(r)]) br.set(c - 1);
        work.push_back(std::move(br));
    }

    std::vector<char> is_pivot_col(static_cast<size_t>(n_), 0);
    int pivot_row = 0;
    for (int col = 0; col < n_ && pivot_row < m; ++col) {
        int found = -1;
        for (int r = pivot_row; r < m; ++r)
            if (work[static_cast<size_t>(r)].get(col)) { found = r; break; }
        if (found < 0) continue;
        std::swap(work[static_cast<size_t>(pivot_row)], work[static_cast<size_t>(found)]);
        for (int r = 0; r < m; ++r)
            if (r != pivot_row && work[static_cast<size_t>(r)].get(col))
                work[static_cast<size_t>(r)] ^= work[static_cast<size_t>(pivot_row)];
        pivot_cols_.push_back(col + 1);
        is_pivot_col[static_cast<size_t>(col)] = 1;
        ++pivot_row;
    }
    rank_ = pivot_row;

    info_set_.clear();
    for (int col = 1; col <= n_; ++col)
        if (!is_pivot_col[static_cast<size_t>(col - 1)]) info_set_.push_back(col);

    // In full RREF every non-pivot entry of a pivot row sits on an
    // information-set column, so encoding is a direct substitution.
    solve_supports_.assign(static_cast<size_t>(rank_), {});
    for (int r = 0; r < rank_; ++r) {
        for (int col = 1; col <= n_; ++col) {
            if (col == pivot_cols_[static_cast<size_t>(r)]) continue;
            if (work[static_cast<size_t>(r)].get(col - 1))
                solve_supports_[static_cast<size_t>(r)].push_back(col);
        }
    }
}

const std::vector<int>& ParityCheckMatrix::rows_containing(int symbol) const {
    if (symbol < 1 || symbol > n_) throw std::out_of_range("symbol index out of range");
    return col_rows_[static_cast<size_t>(symbol)];
}

std::vector<RecoveryEquation> ParityCheckMatrix::recovery_equations(int symbol) const {
    std::vector<RecoveryEquation> eqs;
    for (int r : rows_containing(symbol)) {
        RecoveryEquation eq;
        eq.target = symbol;
        eq.row = r;
        for (int c : rows_[static_cast<size_t>(r)])
            if (c != symbol) eq.helpers.push_back(c);
        eqs.push_back(std::move(eq));
    }
    std::stable_sort(eqs.begin(), eqs.end(), [](const RecoveryEquation& a, const RecoveryEquation& b) {
        if (a.helpers.size() != b.helpers.size()) return a.helpers.size() < b.helpers.size();
        return a.row < b.row;
    });
    return eqs;
}

std::vector<std::uint8_t> ParityCheckMatrix::encode(std::span<const std::uint8_t> data) const {
    if (static_cast<int>(data.size()) != k())
        throw std::invalid_argument("encode: data length must equal k");
    std::vector<std::uint8_t> c(static_cast<size_t>(n_) + 1, 0);  // 1-based
    for (size_t i = 0; i < info_set_.size(); ++i)
        c[static_cast<size_t>(info_set_[i])] = data[i] & 1;
    for (int r = 0; r < rank_; ++r) {
        std::uint8_t acc = 0;
        for (int col : solve_supports_[static_cast<size_t>(r)]) acc ^= c[static_cast<size_t>(col)];
        c[static_cast<size_t>(pivot_cols_[static_cast<size_t>(r)])] = acc;
    }
    c.erase(c.begin());
    return c;
}

bool ParityCheckMatrix::in_kernel(std::span<const std::uint8_t> word) const {
    if (static_cast<int>(word.size()) != n_)
        throw std::invalid_argument("in_kernel: word length must equal n");
    for (const auto& r : rows_) {
        std::uint8_t acc = 0;
        for (int c : r) acc ^= word[static_cast<size_t>(c - 1)];
        if (acc & 1) return false;
    }
    return true;
}

ParityCheckMatrix build_array_ldpc(const ArrayCodeSpec& spec) {
    spec.validate();
    const int q = spec.q;
    const int n = spec.kk * q;
    std::vector<std::vector<int>> rows(static_cast<size_t>(spec.j) * q);
    for (int bi = 1; bi <= spec.j; ++bi) {
        for (int bl = bi; bl <= spec.kk; ++bl) {
            const long long e = static_cast<long long>(bi - 1) * (bl - bi) % q;
            for (int r = 0; r < q; ++r) {
                const int row_id = (bi - 1) * q + r;
                const int col = (bl - 1) * q + static_cast<int>((r + e) % q) + 1;
                rows[static_cast<size_t>(row_id)].push_back(col);
            }
        }
    }
    return ParityCheckMatrix(n, std::move(rows));
}

namespace {

struct TokenReader {
    std::istringstream in;
    explicit TokenReader(std::string_view text) : in(std::string(text)) {}
    int next(const char* what) {
        long long v = 0;
        if (!(in >> v)) throw std::invalid_argument(std::string("alist: missing or malformed ") + what);
        if (v < 0 || v > 1'000'000'000) throw std::invalid_argument(std::string("alist: value out of range for ") + what);
        return static_cast<int>(v);
    }
    bool exhausted() {
        long long v;
        return !(in >> v);
    }
};

}  // namespace

ParityCheckMatrix load_alist(std::string_view text) {
    TokenReader tr(text);
    const int n = tr.next("column count");
    const int m = tr.next("row count");
    if (n < 1 || m < 1) throw std::invalid_argument("alist: dimensions must be positive");
    const int max_col = tr.next("max column degree");
    const int max_row = tr.next("max row degree");

    std::vector<int> col_deg(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        col_deg[static_cast<size_t>(i)] = tr.next("column degree");
        if (col_deg[static_cast<size_t>(i)] > max_col)
            throw std::invalid_argument("alist: column degree exceeds declared maximum");
    }
    std::vector<int> row_deg(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        row_deg[static_cast<size_t>(i)] = tr.next("row degree");
        if (row_deg[static_cast<size_t>(i)] > max_row)
            throw std::invalid_argument("alist: row degree exceeds declared maximum");
    }

    std::vector<std::vector<int>> cols(static_cast<size_t>(n));
    for (int c = 0; c < n; ++c) {
        for (int j = 0; j < max_col; ++j) {
            const int v = tr.next("column entry");
            if (j < col_deg[static_cast<size_t>(c)]) {
                if (v < 1 || v > m) throw std::invalid_argument("alist: row index out of range");
                cols[static_cast<size_t>(c)].push_back(v);
            } else if (v != 0) {
                throw std::invalid_argument("alist: nonzero padding in column list");
            }
        }
    }
    std::vector<std::vector<int>> rows(static_cast<size_t>(m));
    for (int r = 0; r < m; ++r) {
        for (int j = 0; j < max_row; ++j) {
            const int v = tr.next("row entry");
            if (j < row_deg[static_cast<size_t>(r)]) {
                if (v < 1 || v > n) throw std::invalid_argument("alist: column index out of range");
                rows[static_cast<size_t>(r)].push_back(v);
            } else if (v != 0) {
                throw std::invalid_argument("alist: nonzero padding in row list");
            }
        }
    }

    for (auto& r : rows) std::sort(r.begin(), r.end());

    // Row lists are authoritative; the column lists must describe the same matrix.
    std::vector<std::vector<int>> check_cols(static_cast<size_t>(n));
    for (int r = 0; r < m; ++r)
        for (int c : rows[static_cast<size_t>(r)]) check_cols[static_cast<size_t>(c - 1)].push_back(r + 1);
    for (int c = 0; c < n; ++c) {
        auto sorted_given = cols[static_cast<size_t>(c)];
        std::sort(sorted_given.begin(), sorted_given.end());
        if (sorted_given != check_cols[static_cast<size_t>(c)])
            throw std::invalid_argument("alist: column and row lists are inconsistent");
    }

    return ParityCheckMatrix(n, std::move(rows));
}

std::string save_alist(const ParityCheckMatrix& h) {
    const int n = h.n();
    const int m = h.row_count();
    std::vector<std::vector<int>> cols(static_cast<size_t>(n));
    for (int r = 0; r < m; ++r)
        for (int c : h.row(r)) cols[static_cast<size_t>(c - 1)].push_back(r + 1);
    size_t max_col = 0, max_row = 0;
    for (const auto& c : cols) max_col = std::max(max_col, c.size());
    for (int r = 0; r < m; ++r) max_row = std::max(max_row, h.row(r).size());

    std::ostringstream out;
    out << n << ' ' << m << '\n';
    out << max_col << ' ' << max_row << '\n';
    for (int c = 0; c < n; ++c) out << cols[static_cast<size_t>(c)].size() << (c + 1 == n ? '\n' : ' ');
    for (int r = 0; r < m; ++r) out << h.row(r).size() << (r + 1 == m ? '\n' : ' ');
    for (int c = 0; c < n; ++c) {
        for (size_t j = 0; j < max_col; ++j) {
            out << (j < cols[static_cast<size_t>(c)].size() ? cols[static_cast<size_t>(c)][j] : 0);
            out << (j + 1 == max_col ? '\n' : ' ');
        }
    }
    for (int r = 0; r < m; ++r) {
        for (size_t j = 0; j < max_row; ++j) {
            out << (j < h.row(r).size() ? h.row(r)[j] : 0);
            out << (j + 1 == max_row ? '\n' : ' ');
        }
    }
    return out.str();
}

ParityCheckMatrix example_h8() {
    return ParityCheckMatrix(8, {{3, 5, 6}, {1, 3, 7}, {1, 2, 4}, {2, 4, 7, 8}});
}

}  // namespace coachsim
