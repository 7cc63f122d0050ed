#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coachsim {

/// One repair alternative for a lost symbol: the symbol equals the XOR of
/// its helpers in every valid codeword. Symbol indices are 1-based.
struct RecoveryEquation {
    int target = 0;
    std::vector<int> helpers;  // ascending, never contains target
    int row = 0;               // 0-based parity-check row this came from
};

inline bool operator==(const RecoveryEquation& a, const RecoveryEquation& b) {
    return a.target == b.target && a.helpers == b.helpers && a.row == b.row;
}

/// Parameters of the quasi-cyclic array code construction: a j x kk grid of
/// q x q blocks, zero below the block diagonal, cyclic-shift powers above.
struct ArrayCodeSpec {
    int q = 0;   // prime circulant size
    int j = 0;   // block rows (nominal column degree)
    int kk = 0;  // block columns (nominal row degree)

    void validate() const;  // throws std::invalid_argument
};

/// Sparse binary parity-check matrix. Rows are strictly ascending 1-based
/// column index lists. Rank over GF(2) is computed once at construction,
/// along with a fixed information set used for systematic encoding.
class ParityCheckMatrix {
public:
    ParityCheckMatrix(int n, std::vector<std::vector<int>> rows);

    int n() const { return n_; }
    int row_count() const { return static_cast<int>(rows_.size()); }
    const std::vector<int>& row(int r) const { return rows_[static_cast<size_t>(r)]; }
    const std::vector<std::vector<int>>& rows() const { return rows_; }

    int rank() const { return rank_; }
    int k() const { return n_ - rank_; }

    /// 0-based ids of rows whose support contains the symbol.
    const std::vector<int>& rows_containing(int symbol) const;

    /// All recovery alternatives for one lost symbol, ordered by ascending
    /// helper count, ties by ascending row id.
    std::vector<RecoveryEquation> recovery_equations(int symbol) const;

    /// Ascending 1-based columns of the information set (the k pivot-free
    /// columns under left-to-right elimination).
    const std::vector<int>& information_set() const { return info_set_; }

    /// Systematic encoder: |data| must be k; the information-set coordinates
    /// of the result equal data and H * c^T = 0.
    std::vector<std::uint8_t> encode(std::span<const std::uint8_t> data) const;

    /// True when H * word^T = 0 over GF(2). |word| must be n.
    bool in_kernel(std::span<const std::uint8_t> word) const;

    friend bool operator==(const ParityCheckMatrix& a, const ParityCheckMatrix& b) {
        return a.n_ == b.n_ && a.rows_ == b.rows_;
    }

private:
    void eliminate();  // fills rank_, info_set_, solve plan

    int n_ = 0;
    std::vector<std::vector<int>> rows_;
    std::vector<std::vector<int>> col_rows_;  // symbol -> row ids, index 0 unused
    int rank_ = 0;
    std::vector<int> info_set_;
    std::vector<int> pivot_cols_;                     // per reduced row
    std::vector<std::vector<int>> solve_supports_;    // per reduced row: non-pivot support
};

ParityCheckMatrix build_array_ldpc(const ArrayCodeSpec& spec);

/// MacKay alist text format, 1-based indices, zero padding ignored on load.
ParityCheckMatrix load_alist(std::string_view text);
std::string save_alist(const ParityCheckMatrix& h);

/// The 4x8 example matrix used across the unit tests.
ParityCheckMatrix example_h8();

}  // namespace coachsim
