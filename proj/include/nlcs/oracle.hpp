#pragma once

#include <complex>
#include <span>
#include <vector>

#include "nlcs/nonlinearity.hpp"
#include "nlcs/states.hpp"

namespace nlcs {

/// Dense complex matrix sized for truncated number-basis work (dim up to a
/// few hundred). Deliberately plain: exact arithmetic at the matrix level is
/// the point, not speed.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int dim) : dim_(dim), data_(static_cast<size_t>(dim) * dim) {}

    static ComplexMatrix identity(int dim);

    int dim() const noexcept { return dim_; }
    std::complex<double>& at(int i, int j) { return data_[static_cast<size_t>(i) * dim_ + j]; }
    const std::complex<double>& at(int i, int j) const { return data_[static_cast<size_t>(i) * dim_ + j]; }

    ComplexMatrix dagger() const;
    std::vector<std::complex<double>> apply(std::span<const std::complex<double>> v) const;

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator*(std::complex<double> s, const ComplexMatrix& m);

    /// Largest |entry| over the lower-left block of the given size.
    double max_abs_block(int block) const;

private:
    int dim_ = 0;
    std::vector<std::complex<double>> data_;
};

/// The truncated ladder family: bare a, a', N plus the deformed pair
/// A = a f(N), A' = f(N) a' and the conjugate pair B = a / f(N), B' = a' / f(N).
struct OperatorFamily {
    int dim = 0;
    NonlinearitySpec spec = NonlinearitySpec::identity();
    std::vector<double> f; // f(0) .. f(dim-1)
    ComplexMatrix a, a_dag, number;
    ComplexMatrix big_a, big_a_dag; // deformed pair
    ComplexMatrix big_b, big_b_dag; // conjugate pair
};

OperatorFamily build_operators(const NonlinearitySpec& spec, int dim);

/// Max safe-block residual of each algebra relation. The top 2 levels are
/// excluded everywhere: a degree-k operator word corrupts at most the top k
/// rows of the truncated matrices.
struct CommutatorReport {
    double n_with_a = 0.0;      // [N, A] + A
    double n_with_a_dag = 0.0;  // [N, A'] - A'
    double a_with_a_dag = 0.0;  // [A, A'] - ((N+1)f^2(N+1) - N f^2(N))
    double a_with_b_dag = 0.0;  // [A, B'] - 1
    double b_with_a_dag = 0.0;  // [B, A'] - 1
    double max_residual() const;
};

CommutatorReport check_commutators(const OperatorFamily& family);

/// Which displacement exponential to apply to the vacuum:
///   direct  exp(b A' - conj(b) B)  generates the displacement family
///   dual    exp(b B' - conj(b) A)  generates the eigenstate family
enum class DisplacementKind { direct, dual };

/// exp(M)|0> for the chosen generator, computed by scaled Taylor action with
/// a diagonal balancing similarity (the generator is bidiagonal with entries
/// spanning orders of magnitude when f spikes near a denominator zero).
/// Returns the normalized vector; TailOverflow if more than 1e-10 of the mass
/// sits in the top quarter of the basis.
std::vector<std::complex<double>> displace_exact(const NonlinearitySpec& spec, std::complex<double> beta,
                                                 DisplacementKind which, int dim);

/// || (A - alpha) |psi> ||_2 over the safe block.
double eigen_residual(std::span<const std::complex<double>> state, const NonlinearitySpec& spec,
                      std::complex<double> alpha, int dim);

enum class Ladder { lower, raise };

/// <psi| word |psi> with the word applied right-to-left, e.g. {raise, lower}
/// is a'a. Degree at most 4 keeps the truncation corruption inside the
/// tail-safe zone for the states used here.
std::complex<double> quadratic_form(std::span<const std::complex<double>> state,
                                    std::span<const Ladder> word);

/// |<u|v>| with the shorter vector zero-padded.
double overlap(std::span<const std::complex<double>> u, std::span<const std::complex<double>> v);

/// Copy a state's coefficients into a dim-sized dense vector.
std::vector<std::complex<double>> embed(const StateExpansion& state, int dim);

} // namespace nlcs
