#pragma once

#include "znrec/int_types.hpp"
#include "znrec/linalg.hpp"
#include "znrec/matrix.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace znrec {

// Symmetric integral Gram matrix. Positive definiteness is not checked here;
// it surfaces during orthogonalization.
class GramMatrix {
public:
    GramMatrix() = default;
    explicit GramMatrix(IntegerMatrix m) : m_(std::move(m)) {
        if (!m_.is_symmetric()) throw std::invalid_argument("GramMatrix: not symmetric");
    }

    static GramMatrix from_basis(const IntegerMatrix& basis) {
        return GramMatrix(gram_of(basis));
    }

    int n() const { return m_.rows(); }
    const IntegerMatrix& matrix() const { return m_; }
    const Integer& operator()(int i, int j) const { return m_(i, j); }

    std::pair<Integer, Integer> diag_range() const {
        Integer mn = m_(0, 0), mx = m_(0, 0);
        for (int i = 1; i < n(); ++i) {
            if (m_(i, i) < mn) mn = m_(i, i);
            if (m_(i, i) > mx) mx = m_(i, i);
        }
        return {mn, mx};
    }

private:
    IntegerMatrix m_;
};

struct StageTrace {
    std::string stage;
    int block_size = 0;
    double seconds = 0.0;
    Integer min_diag;
    Integer max_diag;
    long swaps = 0;
    int rounds = 0;
    bool converged = true;
};

struct ReductionResult {
    GramMatrix reduced;
    IntegerMatrix transform;  // U with U * G_input * U^t = reduced
    std::vector<StageTrace> trace;
    bool converged = true;
    bool timed_out = false;
};

class Deadline {
public:
    Deadline() = default;
    static Deadline never() { return Deadline(); }
    static Deadline after_seconds(double s) {
        Deadline d;
        if (s > 0) {
            d.at_ = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(s));
        }
        return d;
    }

    bool expired() const {
        return at_.has_value() && std::chrono::steady_clock::now() >= *at_;
    }

private:
    std::optional<std::chrono::steady_clock::time_point> at_;
};

}  // namespace znrec
