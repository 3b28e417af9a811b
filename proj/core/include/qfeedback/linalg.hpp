#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qfeedback {

using Complex = std::complex<double>;

/// Structural tolerance used for state, operator and basis validation.
inline constexpr double kStructuralTol = 1e-9;
/// Tolerance for checks of exact protocol identities.
inline constexpr double kExactTol = 1e-12;

/// Dense row-major complex matrix. Sizes here never exceed 4096x4096.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> data);
    Matrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static Matrix identity(std::size_t n);
    static Matrix outer(std::span<const Complex> ket, std::span<const Complex> bra);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const Complex> data() const { return data_; }
    std::span<Complex> data() { return data_; }

    Matrix adjoint() const;
    Complex trace() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(Complex scale);

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, Complex s) { return a *= s; }
    friend Matrix operator*(Complex s, Matrix a) { return a *= s; }
    friend Matrix operator*(const Matrix& a, const Matrix& b);

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

std::vector<Complex> multiply(const Matrix& m, std::span<const Complex> v);

/// Kronecker product a ⊗ b.
Matrix kron(const Matrix& a, const Matrix& b);

/// Largest entrywise modulus of a - b; matrices must share a shape.
double max_abs_diff(const Matrix& a, const Matrix& b);
double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b);

bool is_hermitian(const Matrix& m, double tol = kStructuralTol);
bool is_unitary(const Matrix& m, double tol = kStructuralTol);

/// True when m + shift·I admits a Cholesky factorisation, i.e. every
/// eigenvalue of the Hermitian matrix m is >= -shift.
bool is_positive_semidefinite(const Matrix& m, double shift = kStructuralTol);

/// ⟨a|b⟩, conjugating a.
Complex inner(std::span<const Complex> a, std::span<const Complex> b);
double norm(std::span<const Complex> v);

}  // namespace qfeedback
