#pragma once

#include <cassert>
#include <vector>

namespace toric {

// Dense symmetric rank-3 tensor over R^n, stored without symmetry
// compression (n is at most 3 or 4 in practice, so the waste is irrelevant).
class Tensor3 {
public:
    explicit Tensor3(int n = 0) : n_(n), v_(static_cast<size_t>(n) * n * n, 0.0) {}

    int dim() const { return n_; }

    double& operator()(int a, int b, int c) {
        assert(a >= 0 && a < n_ && b >= 0 && b < n_ && c >= 0 && c < n_);
        return v_[(static_cast<size_t>(a) * n_ + b) * n_ + c];
    }
    double operator()(int a, int b, int c) const {
        assert(a >= 0 && a < n_ && b >= 0 && b < n_ && c >= 0 && c < n_);
        return v_[(static_cast<size_t>(a) * n_ + b) * n_ + c];
    }

    void setZero() { std::fill(v_.begin(), v_.end(), 0.0); }

private:
    int n_;
    std::vector<double> v_;
};

// Dense symmetric rank-4 tensor over R^n.
class Tensor4 {
public:
    explicit Tensor4(int n = 0)
        : n_(n), v_(static_cast<size_t>(n) * n * n * n, 0.0) {}

    int dim() const { return n_; }

    double& operator()(int a, int b, int c, int d) {
        return v_[((static_cast<size_t>(a) * n_ + b) * n_ + c) * n_ + d];
    }
    double operator()(int a, int b, int c, int d) const {
        return v_[((static_cast<size_t>(a) * n_ + b) * n_ + c) * n_ + d];
    }

    void setZero() { std::fill(v_.begin(), v_.end(), 0.0); }

private:
    int n_;
    std::vector<double> v_;
};

}  // namespace toric
