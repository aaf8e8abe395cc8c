// SPDX-License-Identifier: Apache-2.0
//
// simkit: link-level simulation library for IRS-assisted OFDM uplinks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SIMKIT_COMPLEX_HPP
#define SIMKIT_COMPLEX_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace simkit {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

/// Dense complex matrix with row-major storage.
class cmat {
  public:
    cmat() = default;

    cmat(std::size_t rows, std::size_t cols, cplx fill = cplx(0.0, 0.0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    cplx &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    cplx *data() { return data_.data(); }
    const cplx *data() const { return data_.data(); }

    cvec col(std::size_t j) const {
        cvec out(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            out[i] = (*this)(i, j);
        return out;
    }

    cvec row(std::size_t i) const {
        cvec out(cols_);
        for (std::size_t j = 0; j < cols_; ++j)
            out[j] = (*this)(i, j);
        return out;
    }

    void set_col(std::size_t j, const cvec &v) {
        if (v.size() != rows_)
            throw std::invalid_argument("cmat::set_col: length mismatch");
        for (std::size_t i = 0; i < rows_; ++i)
            (*this)(i, j) = v[i];
    }

    void set_row(std::size_t i, const cvec &v) {
        if (v.size() != cols_)
            throw std::invalid_argument("cmat::set_row: length mismatch");
        for (std::size_t j = 0; j < cols_; ++j)
            (*this)(i, j) = v[j];
    }

    bool operator==(const cmat &other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    cvec data_;
};

/// Squared Euclidean norm.
inline double norm2(const cvec &x) {
    double acc = 0.0;
    for (const cplx &v : x)
        acc += std::norm(v);
    return acc;
}

/// Squared Frobenius norm.
inline double norm2(const cmat &x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            acc += std::norm(x(i, j));
    return acc;
}

inline bool all_finite(const cvec &x) {
    for (const cplx &v : x)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            return false;
    return true;
}

inline bool all_finite(const cmat &x) {
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            if (!std::isfinite(x(i, j).real()) || !std::isfinite(x(i, j).imag()))
                return false;
    return true;
}

template <typename T> inline void require_finite(const T &x, const char *what) {
    if (!all_finite(x))
        throw std::runtime_error(std::string(what) + ": non-finite entries");
}

} // namespace simkit

#endif // SIMKIT_COMPLEX_HPP
