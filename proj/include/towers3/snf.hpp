#ifndef TOWERS3_SNF_HPP
#define TOWERS3_SNF_HPP

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace towers3 {

// Smith normal form over the integers for the small relation matrices that
// arise from abelianized pc sections.  Returns the diagonal d with the
// divisibility chain d[0] | d[1] | ... together with the right transform V
// (unimodular, cols x cols), so that for a row vector x of generator
// exponents the invariant-factor coordinates are y = x * V, entry i taken
// mod d[i].
struct SmithResult {
    std::vector<long long> diag;            // length = #cols
    std::vector<std::vector<long long>> V;  // cols x cols
};

class SmithWorker {
  public:
    SmithWorker(std::vector<std::vector<long long>> A, size_t ncols)
        : A_(std::move(A)), ncols_(ncols), nrows_(A_.size()) {
        for (auto& r : A_)
            if (r.size() != ncols_) throw std::invalid_argument("ragged relation matrix");
        V_.assign(ncols_, std::vector<long long>(ncols_, 0));
        for (size_t i = 0; i < ncols_; ++i) V_[i][i] = 1;
    }

    SmithResult run() {
        size_t lim = std::min(nrows_, ncols_);
        rank_ = eliminate_from(0, lim);
        fix_divisibility();
        SmithResult res;
        res.diag.assign(ncols_, 0);
        for (size_t i = 0; i < rank_; ++i) res.diag[i] = A_[i][i];
        res.V = std::move(V_);
        return res;
    }

  private:
    std::vector<std::vector<long long>> A_;
    std::vector<std::vector<long long>> V_;
    size_t ncols_, nrows_, rank_ = 0;
    static constexpr long long CAP = 1LL << 58;

    long long guard(long long v) const {
        if (std::llabs(v) > CAP) throw std::overflow_error("SNF entry overflow");
        return v;
    }
    void col_addmul(size_t dst, size_t src, long long q) {
        for (size_t r = 0; r < nrows_; ++r) A_[r][dst] = guard(A_[r][dst] - q * A_[r][src]);
        for (size_t r = 0; r < ncols_; ++r) V_[r][dst] = guard(V_[r][dst] - q * V_[r][src]);
    }
    void col_swap(size_t a, size_t b) {
        for (size_t r = 0; r < nrows_; ++r) std::swap(A_[r][a], A_[r][b]);
        for (size_t r = 0; r < ncols_; ++r) std::swap(V_[r][a], V_[r][b]);
    }
    void col_negate(size_t c) {
        for (size_t r = 0; r < nrows_; ++r) A_[r][c] = -A_[r][c];
        for (size_t r = 0; r < ncols_; ++r) V_[r][c] = -V_[r][c];
    }
    void row_addmul(size_t dst, size_t src, long long q) {
        for (size_t c = 0; c < ncols_; ++c) A_[dst][c] = guard(A_[dst][c] - q * A_[src][c]);
    }

    // Diagonalize the trailing block starting at t0; returns one past the
    // last pivot position.
    size_t eliminate_from(size_t t0, size_t lim) {
        size_t t = t0;
        while (t < lim) {
            size_t pr = nrows_, pc = ncols_;
            long long best = 0;
            for (size_t r = t; r < nrows_; ++r)
                for (size_t c = t; c < ncols_; ++c)
                    if (A_[r][c] != 0 && (best == 0 || std::llabs(A_[r][c]) < best)) {
                        best = std::llabs(A_[r][c]);
                        pr = r;
                        pc = c;
                    }
            if (best == 0) break;
            if (pr != t) std::swap(A_[pr], A_[t]);
            if (pc != t) col_swap(pc, t);

            bool residue = false;
            for (size_t r = t + 1; r < nrows_; ++r)
                if (A_[r][t]) {
                    row_addmul(r, t, A_[r][t] / A_[t][t]);
                    if (A_[r][t]) residue = true;
                }
            for (size_t c = t + 1; c < ncols_; ++c)
                if (A_[t][c]) {
                    col_addmul(c, t, A_[t][c] / A_[t][t]);
                    if (A_[t][c]) residue = true;
                }
            if (residue) continue;  // a smaller remainder appeared; redo this pivot
            if (A_[t][t] < 0) col_negate(t);
            ++t;
        }
        return t;
    }

    void fix_divisibility() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = 0; i + 1 < rank_; ++i) {
                if (A_[i][i] != 0 && A_[i + 1][i + 1] % A_[i][i] != 0) {
                    col_addmul(i, i + 1, -1);  // drags d_{i+1} into column i
                    rank_ = eliminate_from(i, std::min(nrows_, ncols_));
                    changed = true;
                    break;
                }
            }
        }
    }
};

inline SmithResult smith_normal_form(std::vector<std::vector<long long>> A, size_t ncols) {
    return SmithWorker(std::move(A), ncols).run();
}

} // namespace towers3

#endif
