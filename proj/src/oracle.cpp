#include "nlcs/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "nlcs/errors.hpp"

namespace nlcs {

ComplexMatrix ComplexMatrix::identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::dagger() const {
    ComplexMatrix m(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m.at(i, j) = std::conj(at(j, i));
    return m;
}

std::vector<std::complex<double>> ComplexMatrix::apply(std::span<const std::complex<double>> v) const {
    if (static_cast<int>(v.size()) != dim_) throw InvalidArgument("matrix apply: size mismatch");
    std::vector<std::complex<double>> out(dim_);
    for (int i = 0; i < dim_; ++i) {
        std::complex<double> acc = 0.0;
        for (int j = 0; j < dim_; ++j) acc += at(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim_ != b.dim_) throw InvalidArgument("matrix product: size mismatch");
    const int d = a.dim_;
    ComplexMatrix out(d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            const std::complex<double> aik = a.at(i, k);
            if (aik == std::complex<double>{}) continue;
            for (int j = 0; j < d; ++j) out.at(i, j) += aik * b.at(k, j);
        }
    return out;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim_ != b.dim_) throw InvalidArgument("matrix sum: size mismatch");
    ComplexMatrix out = a;
    for (size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
    return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim_ != b.dim_) throw InvalidArgument("matrix difference: size mismatch");
    ComplexMatrix out = a;
    for (size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
    return out;
}

ComplexMatrix operator*(std::complex<double> s, const ComplexMatrix& m) {
    ComplexMatrix out = m;
    for (auto& e : out.data_) e *= s;
    return out;
}

double ComplexMatrix::max_abs_block(int block) const {
    double worst = 0.0;
    for (int i = 0; i < block; ++i)
        for (int j = 0; j < block; ++j) worst = std::max(worst, std::abs(at(i, j)));
    return worst;
}

OperatorFamily build_operators(const NonlinearitySpec& spec, int dim) {
    if (dim < 2) throw InvalidArgument("build_operators: dim must be >= 2");
    OperatorFamily fam;
    fam.dim = dim;
    fam.spec = spec;
    fam.f.resize(dim);
    for (int n = 0; n < dim; ++n) {
        fam.f[n] = spec.f(n);
        if (fam.f[n] == 0.0)
            throw ZeroNonlinearity(n, "build_operators: f(" + std::to_string(n) +
                                          ") = 0, conjugate ladder needs 1/f");
    }

    fam.a = ComplexMatrix(dim);
    for (int n = 0; n + 1 < dim; ++n) fam.a.at(n, n + 1) = std::sqrt(n + 1.0);
    fam.a_dag = fam.a.dagger();
    fam.number = ComplexMatrix(dim);
    for (int n = 0; n < dim; ++n) fam.number.at(n, n) = n;

    ComplexMatrix f_diag(dim), f_inv(dim);
    for (int n = 0; n < dim; ++n) {
        f_diag.at(n, n) = fam.f[n];
        f_inv.at(n, n) = 1.0 / fam.f[n];
    }
    fam.big_a = fam.a * f_diag;
    fam.big_a_dag = f_diag * fam.a_dag;
    fam.big_b = fam.a * f_inv;
    fam.big_b_dag = f_inv * fam.a_dag;
    return fam;
}

double CommutatorReport::max_residual() const {
    return std::max({n_with_a, n_with_a_dag, a_with_a_dag, a_with_b_dag, b_with_a_dag});
}

CommutatorReport check_commutators(const OperatorFamily& fam) {
    const int dim = fam.dim;
    const int safe = dim - 2;
    if (safe < 1) throw InvalidArgument("check_commutators: dim too small for a safe block");

    auto comm = [](const ComplexMatrix& x, const ComplexMatrix& y) { return x * y - y * x; };

    CommutatorReport rep;
    rep.n_with_a = (comm(fam.number, fam.big_a) + fam.big_a).max_abs_block(safe);
    rep.n_with_a_dag = (comm(fam.number, fam.big_a_dag) - fam.big_a_dag).max_abs_block(safe);

    // [A, A'] should equal the diagonal (N+1) f^2(N+1) - N f^2(N); entries are
    // only needed inside the safe block, which stays within the stored f range.
    ComplexMatrix rhs(dim);
    for (int n = 0; n < safe; ++n) {
        const double fn1 = fam.f[n + 1];
        const double fn = fam.f[n];
        rhs.at(n, n) = (n + 1.0) * fn1 * fn1 - n * fn * fn;
    }
    rep.a_with_a_dag = (comm(fam.big_a, fam.big_a_dag) - rhs).max_abs_block(safe);

    const ComplexMatrix one = ComplexMatrix::identity(dim);
    rep.a_with_b_dag = (comm(fam.big_a, fam.big_b_dag) - one).max_abs_block(safe);
    rep.b_with_a_dag = (comm(fam.big_b, fam.big_a_dag) - one).max_abs_block(safe);
    return rep;
}

namespace {

// exp(M) |0> by scaled Taylor action. M is conjugated by a diagonal similarity
// first: the generator is bidiagonal, and balancing the sub/super pair brings
// its norm down from "f-factorial spikes" scale to ~2|beta| sqrt(dim), exactly
// (the result is D exp(D^-1 M D) D^-1 |0> with no approximation).
std::vector<std::complex<double>> exp_action_on_vacuum(const ComplexMatrix& gen) {
    const int dim = gen.dim();

    std::vector<double> log_d(dim, 0.0);
    for (int n = 0; n + 1 < dim; ++n) {
        const double sub = std::abs(gen.at(n + 1, n));
        const double sup = std::abs(gen.at(n, n + 1));
        const double step = (sub > 0.0 && sup > 0.0) ? 0.5 * (std::log(sub) - std::log(sup)) : 0.0;
        log_d[n + 1] = log_d[n] + step;
    }

    ComplexMatrix balanced(dim);
    double norm1 = 0.0;
    for (int j = 0; j < dim; ++j) {
        double col = 0.0;
        for (int i = 0; i < dim; ++i) {
            const auto e = gen.at(i, j);
            if (e == std::complex<double>{}) continue;
            balanced.at(i, j) = e * std::exp(log_d[j] - log_d[i]);
            col += std::abs(balanced.at(i, j));
        }
        norm1 = std::max(norm1, col);
    }

    int squarings = 0;
    while (norm1 > 1.0 && squarings < 30) {
        norm1 *= 0.5;
        ++squarings;
    }
    if (norm1 > 1.0)
        throw InvalidArgument("displace_exact: generator norm too large to exponentiate");
    const ComplexMatrix scaled = std::complex<double>(std::ldexp(1.0, -squarings)) * balanced;

    std::vector<std::complex<double>> v(dim);
    v[0] = 1.0;
    for (long rep = 0; rep < (1L << squarings); ++rep) {
        std::vector<std::complex<double>> sum = v;
        std::vector<std::complex<double>> term = v;
        for (int k = 1; k <= 80; ++k) {
            term = scaled.apply(term);
            const double inv_k = 1.0 / k;
            double term_norm = 0.0, sum_norm = 0.0;
            for (int i = 0; i < dim; ++i) {
                term[i] *= inv_k;
                sum[i] += term[i];
                term_norm += std::norm(term[i]);
                sum_norm += std::norm(sum[i]);
            }
            if (term_norm <= 1e-36 * sum_norm) break;
        }
        v = std::move(sum);
    }

    for (int n = 0; n < dim; ++n) v[n] *= std::exp(log_d[n]);
    return v;
}

} // namespace

std::vector<std::complex<double>> displace_exact(const NonlinearitySpec& spec, std::complex<double> beta,
                                                 DisplacementKind which, int dim) {
    if (dim < 4) throw InvalidArgument("displace_exact: dim must be >= 4");
    if (beta == std::complex<double>{}) {
        std::vector<std::complex<double>> vac(dim);
        vac[0] = 1.0;
        return vac;
    }
    const OperatorFamily fam = build_operators(spec, dim);
    const ComplexMatrix& up = which == DisplacementKind::direct ? fam.big_a_dag : fam.big_b_dag;
    const ComplexMatrix& down = which == DisplacementKind::direct ? fam.big_b : fam.big_a;
    const ComplexMatrix gen = beta * up - std::conj(beta) * down;

    auto v = exp_action_on_vacuum(gen);

    double total = 0.0;
    for (const auto& e : v) total += std::norm(e);
    if (!(total > 0.0) || !std::isfinite(total))
        throw TailOverflow("displace_exact: exponential action lost all precision; raise dim");
    double top = 0.0;
    for (int n = (3 * dim) / 4; n < dim; ++n) top += std::norm(v[n]);
    if (top / total > 1e-10)
        throw TailOverflow("displace_exact: " + std::to_string(top / total) +
                           " of the mass sits in the top quarter of the basis; raise dim");

    const double scale = 1.0 / std::sqrt(total);
    for (auto& e : v) e *= scale;
    return v;
}

double eigen_residual(std::span<const std::complex<double>> state, const NonlinearitySpec& spec,
                      std::complex<double> alpha, int dim) {
    if (static_cast<int>(state.size()) != dim)
        throw InvalidArgument("eigen_residual: state must have length dim");
    const OperatorFamily fam = build_operators(spec, dim);
    const auto applied = fam.big_a.apply(state);
    double acc = 0.0;
    for (int n = 0; n < dim - 2; ++n) acc += std::norm(applied[n] - alpha * state[n]);
    return std::sqrt(acc);
}

std::complex<double> quadratic_form(std::span<const std::complex<double>> state,
                                    std::span<const Ladder> word) {
    if (word.size() > 4) throw InvalidArgument("quadratic_form: word degree must be <= 4");
    const int dim = static_cast<int>(state.size());
    if (dim < 2) throw InvalidArgument("quadratic_form: state too short");

    ComplexMatrix a(dim);
    for (int n = 0; n + 1 < dim; ++n) a.at(n, n + 1) = std::sqrt(n + 1.0);
    const ComplexMatrix a_dag = a.dagger();

    std::vector<std::complex<double>> v(state.begin(), state.end());
    for (auto it = word.rbegin(); it != word.rend(); ++it)
        v = (*it == Ladder::lower ? a : a_dag).apply(v);

    std::complex<double> acc = 0.0;
    for (int n = 0; n < dim; ++n) acc += std::conj(state[n]) * v[n];
    return acc;
}

double overlap(std::span<const std::complex<double>> u, std::span<const std::complex<double>> v) {
    const size_t count = std::min(u.size(), v.size());
    std::complex<double> acc = 0.0;
    for (size_t n = 0; n < count; ++n) acc += std::conj(u[n]) * v[n];
    return std::abs(acc);
}

std::vector<std::complex<double>> embed(const StateExpansion& state, int dim) {
    if (dim < 1) throw InvalidArgument("embed: dim must be >= 1");
    std::vector<std::complex<double>> v(dim);
    const int count = std::min(dim, static_cast<int>(state.coeffs().size()));
    for (int n = 0; n < count; ++n) v[n] = state.coeffs()[n];
    return v;
}

} // namespace nlcs
