#include "frailty/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "frailty/addams.hpp"
#include "frailty/error.hpp"

namespace frailty {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void out_of_range(const std::string& family, const std::string& param,
                               double value, const std::string& bound) {
    std::ostringstream os;
    os.precision(17);
    os << family << ": parameter " << param << " = " << value << " violates " << bound;
    fail(ErrorKind::ParameterOutOfRange, os.str());
}

bool finite(double x) { return std::isfinite(x); }

void check_probability(const std::string& family, double pi) {
    if (!(pi > 0.0 && pi < 1.0)) out_of_range(family, "pi", pi, "0 < pi < 1");
}

// --- Laplace transforms of the base families -------------------------------

LaplaceTriple negbin_laplace(double pi, double nu, double s) {
    const double q = 1.0 - pi;
    const double qe = q * std::exp(-s);
    const double d = 1.0 - qe;  // >= pi > 0
    const double l0 = std::exp(nu * (std::log(pi) - std::log1p(-qe)));
    const double a = nu * qe;
    return {l0, -a * l0 / d, l0 * a * (1.0 + a) / (d * d)};
}

LaplaceTriple binomial_laplace(double pi, int n, double s) {
    const double pe = pi * std::exp(-s);
    const double b = (1.0 - pi) + pe;
    const double l0 = std::pow(b, n);
    const double l1 = -n * pe * std::pow(b, n - 1);
    const double l2 = n * pe * std::pow(b, n - 2) * (b + (n - 1) * pe);
    return {l0, l1, l2};
}

LaplaceTriple poisson_laplace(double eta, double s) {
    const double ee = eta * std::exp(-s);
    const double l0 = std::exp(eta * std::expm1(-s));
    return {l0, -ee * l0, (ee + ee * ee) * l0};
}

LaplaceTriple apply_shift(const LaplaceTriple& inner, double p, double s) {
    if (p == 0.0) return inner;
    const double w = std::exp(-p * s);
    return {inner.l0 * w, (inner.l1 - p * inner.l0) * w,
            (inner.l2 - 2.0 * p * inner.l1 + p * p * inner.l0) * w};
}

LaplaceTriple shiftable_laplace(const ShiftableFamily& f, double s) {
    return std::visit(overloaded{
                          [s](const NegBin& nb) { return negbin_laplace(nb.pi, nb.nu, s); },
                          [s](const Binomial& b) { return binomial_laplace(b.pi, b.n, s); },
                          [s](const Poisson& p) { return poisson_laplace(p.eta, s); },
                      },
                      f);
}

FrailtyFamily widen(const ShiftableFamily& f) {
    return std::visit([](const auto& x) -> FrailtyFamily { return x; }, f);
}

// --- Lattice pmfs ----------------------------------------------------------

double negbin_log_pmf(double pi, double nu, double k) {
    return std::lgamma(k + nu) - std::lgamma(nu) - std::lgamma(k + 1.0) + nu * std::log(pi) +
           k * std::log1p(-pi);
}

double poisson_log_pmf(double eta, double k) {
    return -eta + k * std::log(eta) - std::lgamma(k + 1.0);
}

double binomial_log_pmf(double pi, int n, double k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
           k * std::log(pi) + (n - k) * std::log1p(-pi);
}

// Maps z onto a lattice index k = z - offset if z sits on the lattice.
bool lattice_index(double z, double offset, double& k) {
    const double x = z - offset;
    const double r = std::round(x);
    if (r < 0.0 || std::abs(x - r) > 1e-9 * std::max(1.0, std::abs(z))) return false;
    k = r;
    return true;
}

double shiftable_pmf_index(const ShiftableFamily& f, double k) {
    return std::visit(overloaded{
                          [k](const NegBin& nb) { return std::exp(negbin_log_pmf(nb.pi, nb.nu, k)); },
                          [k](const Binomial& b) {
                              return k > b.n ? 0.0 : std::exp(binomial_log_pmf(b.pi, b.n, k));
                          },
                          [k](const Poisson& p) { return std::exp(poisson_log_pmf(p.eta, k)); },
                      },
                      f);
}

Moments shiftable_moments(const ShiftableFamily& f) {
    return std::visit(overloaded{
                          [](const NegBin& nb) {
                              const double q = 1.0 - nb.pi;
                              return Moments{nb.nu * q / nb.pi, nb.nu * q / (nb.pi * nb.pi)};
                          },
                          [](const Binomial& b) {
                              return Moments{b.n * b.pi, b.n * b.pi * (1.0 - b.pi)};
                          },
                          [](const Poisson& p) { return Moments{p.eta, p.eta}; },
                      },
                      f);
}

// Enumerates an infinite lattice series g(0), g(1), ... and truncates it at
// the smallest K whose remaining mass is below `tail_tol`. `limit_ratio` is
// the limit of g(k+1)/g(k), used to bound what lies beyond the last term.
template <class LogPmf>
DiscreteSupport truncate_lattice(LogPmf log_pmf, double offset, double mean, double sd,
                                 double limit_ratio, double tail_tol) {
    std::vector<double> mass;
    const double far = mean + 10.0 * sd + 10.0;
    double remainder = 0.0;
    for (std::size_t k = 0;; ++k) {
        const double g = std::exp(log_pmf(static_cast<double>(k)));
        mass.push_back(g);
        if (static_cast<double>(k) < far) continue;
        const double next = std::exp(log_pmf(static_cast<double>(k + 1)));
        const double ratio = std::max(g > 0.0 ? next / g : 0.0, limit_ratio);
        if (ratio >= 1.0) continue;
        const double bound = next / (1.0 - ratio);
        if (bound < tail_tol * 1e-6 || g == 0.0) {
            remainder = bound;
            break;
        }
        if (k > 50'000'000) fail(ErrorKind::NumericalOverflow, "support enumeration runaway");
    }
    // Suffix sums from the far end are accurate down to the tolerance.
    std::vector<double> tail_after(mass.size());
    double acc = remainder;
    for (std::size_t i = mass.size(); i-- > 0;) {
        tail_after[i] = acc;
        acc += mass[i];
    }
    std::size_t cut = 0;
    while (tail_after[cut] >= tail_tol) ++cut;

    DiscreteSupport out;
    out.truncated = true;
    out.tail_mass = tail_after[cut];
    out.mass.assign(mass.begin(), mass.begin() + static_cast<std::ptrdiff_t>(cut + 1));
    out.z.resize(out.mass.size());
    for (std::size_t i = 0; i < out.z.size(); ++i) out.z[i] = offset + static_cast<double>(i);
    return out;
}

DiscreteSupport shiftable_support(const ShiftableFamily& f, double offset, double tail_tol) {
    return std::visit(
        overloaded{
            [&](const NegBin& nb) {
                const auto m = shiftable_moments(nb);
                return truncate_lattice([&](double k) { return negbin_log_pmf(nb.pi, nb.nu, k); },
                                        offset, m.mean, std::sqrt(m.variance), 1.0 - nb.pi, tail_tol);
            },
            [&](const Binomial& b) {
                DiscreteSupport out;
                for (int k = 0; k <= b.n; ++k) {
                    out.z.push_back(offset + k);
                    out.mass.push_back(std::exp(binomial_log_pmf(b.pi, b.n, k)));
                }
                return out;
            },
            [&](const Poisson& p) {
                return truncate_lattice([&](double k) { return poisson_log_pmf(p.eta, k); }, offset,
                                        p.eta, std::sqrt(p.eta), 0.0, tail_tol);
            },
        },
        f);
}

void validate_shiftable(const ShiftableFamily& f) {
    std::visit(overloaded{
                   [](const NegBin& nb) {
                       check_probability("negbin", nb.pi);
                       if (!(nb.nu > 0.0 && finite(nb.nu))) out_of_range("negbin", "nu", nb.nu, "nu > 0");
                   },
                   [](const Binomial& b) {
                       check_probability("binomial", b.pi);
                       if (b.n < 1) out_of_range("binomial", "n", b.n, "n >= 1");
                   },
                   [](const Poisson& p) {
                       if (!(p.eta > 0.0 && finite(p.eta))) out_of_range("poisson", "eta", p.eta, "eta > 0");
                   },
               },
               f);
}

// Weight A applied to the Poisson masses at z >= 1 in the zero-modified model.
double zmp_scale(const ZeroModifiedPoisson& f) {
    return (1.0 - f.phi * std::exp(-f.eta)) / (-std::expm1(-f.eta));
}

}  // namespace

std::string family_name(const FrailtyFamily& family) {
    return std::visit(overloaded{
                          [](const NegBin&) { return std::string("negbin"); },
                          [](const NegBinPositive&) { return std::string("negbin_positive"); },
                          [](const Binomial&) { return std::string("binomial"); },
                          [](const Poisson&) { return std::string("poisson"); },
                          [](const Shifted& s) { return "shifted_" + family_name(widen(s.inner)); },
                          [](const ZeroModifiedPoisson&) { return std::string("zero_modified_poisson"); },
                          [](const Addams&) { return std::string("addams"); },
                          [](const KPoint&) { return std::string("kpoint"); },
                          [](const GammaFrailty&) { return std::string("gamma"); },
                      },
                      family);
}

void validate(const FrailtyFamily& family) {
    std::visit(
        overloaded{
            [](const NegBin& nb) { validate_shiftable(nb); },
            [](const NegBinPositive& nb) {
                check_probability("negbin_positive", nb.pi);
                if (nb.nu < 1) out_of_range("negbin_positive", "nu", nb.nu, "nu >= 1 (integer)");
            },
            [](const Binomial& b) { validate_shiftable(b); },
            [](const Poisson& p) { validate_shiftable(p); },
            [](const Shifted& s) {
                validate_shiftable(s.inner);
                if (!(s.p >= 0.0 && finite(s.p))) out_of_range("shifted", "p", s.p, "p >= 0");
            },
            [](const ZeroModifiedPoisson& z) {
                if (!(z.eta > 0.0 && finite(z.eta)))
                    out_of_range("zero_modified_poisson", "eta", z.eta, "eta > 0");
                if (!(z.phi >= 0.0 && z.phi < std::exp(z.eta)))
                    out_of_range("zero_modified_poisson", "phi", z.phi, "0 <= phi < exp(eta)");
            },
            [](const Addams& a) {
                if (!(a.gamma > 0.0 && finite(a.gamma))) out_of_range("addams", "gamma", a.gamma, "gamma > 0");
                if (!finite(a.alpha)) out_of_range("addams", "alpha", a.alpha, "finite alpha");
                // alpha > gamma is the scaled binomial, which needs an integer
                // number of trials 1 / (alpha - gamma).
                if (a.alpha > a.gamma) {
                    const double n = 1.0 / (a.alpha - a.gamma);
                    if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n))
                        out_of_range("addams", "alpha", a.alpha,
                                     "1/(alpha - gamma) integer when alpha > gamma");
                }
            },
            [](const KPoint& k) {
                if (k.support.size() != k.probs.size())
                    out_of_range("kpoint", "probs.size", static_cast<double>(k.probs.size()),
                                 "one probability per support point");
                for (std::size_t i = 0; i < k.support.size(); ++i) {
                    if (!(k.support[i] >= 0.0 && finite(k.support[i])))
                        out_of_range("kpoint", "support[" + std::to_string(i) + "]", k.support[i], ">= 0");
                    if (i > 0 && !(k.support[i] > k.support[i - 1]))
                        out_of_range("kpoint", "support[" + std::to_string(i) + "]", k.support[i],
                                     "strictly increasing support");
                    if (!(k.probs[i] > 0.0 && k.probs[i] <= 1.0))
                        out_of_range("kpoint", "probs[" + std::to_string(i) + "]", k.probs[i], "0 < pr <= 1");
                }
                const double total = std::accumulate(k.probs.begin(), k.probs.end(), 0.0);
                if (std::abs(total - 1.0) > 1e-12)
                    out_of_range("kpoint", "sum(probs)", total, "probabilities sum to 1 within 1e-12");
                if (k.support.size() < 2)
                    fail(ErrorKind::DegenerateDistribution, "kpoint: at least two support points needed");
            },
            [](const GammaFrailty& g) {
                if (!(g.mean > 0.0 && finite(g.mean))) out_of_range("gamma", "mean", g.mean, "mean > 0");
                if (!(g.variance > 0.0 && finite(g.variance)))
                    out_of_range("gamma", "variance", g.variance, "variance > 0");
            },
        },
        family);
}

LaplaceTriple laplace(const FrailtyFamily& family, double s) {
    if (!(s >= 0.0)) out_of_range(family_name(family), "s", s, "s >= 0");
    const LaplaceTriple t = std::visit(
        overloaded{
            [s](const NegBin& nb) { return negbin_laplace(nb.pi, nb.nu, s); },
            [s](const NegBinPositive& nb) {
                return apply_shift(negbin_laplace(nb.pi, nb.nu, s), nb.nu, s);
            },
            [s](const Binomial& b) { return binomial_laplace(b.pi, b.n, s); },
            [s](const Poisson& p) { return poisson_laplace(p.eta, s); },
            [s](const Shifted& sh) { return apply_shift(shiftable_laplace(sh.inner, s), sh.p, s); },
            [s](const ZeroModifiedPoisson& z) {
                // L(s) = phi g*(0) + A g*(0) (exp(eta e^{-s}) - 1); the expm1 form
                // avoids cancellation when phi = 0.
                const double a = zmp_scale(z);
                const double g0 = std::exp(-z.eta);
                const double ee = z.eta * std::exp(-s);
                const double w = a * g0 * std::exp(ee);
                return LaplaceTriple{z.phi * g0 + a * g0 * std::expm1(ee), -w * ee, w * (ee + ee * ee)};
            },
            [s](const Addams& a) { return addams::laplace(a, s); },
            [s](const KPoint& k) {
                LaplaceTriple r{0.0, 0.0, 0.0};
                for (std::size_t i = 0; i < k.support.size(); ++i) {
                    const double z = k.support[i];
                    const double w = k.probs[i] * std::exp(-z * s);
                    r.l0 += w;
                    r.l1 -= z * w;
                    r.l2 += z * z * w;
                }
                return r;
            },
            [s](const GammaFrailty& g) {
                const double shape = g.mean * g.mean / g.variance;
                const double rate = g.mean / g.variance;
                const double b = 1.0 + s / rate;
                const double l0 = std::exp(-shape * std::log1p(s / rate));
                return LaplaceTriple{l0, -(shape / rate) * l0 / b,
                                     shape * (shape + 1.0) / (rate * rate) * l0 / (b * b)};
            },
        },
        family);
    if (!(finite(t.l0) && finite(t.l1) && finite(t.l2)) || !(t.l0 > 0.0)) {
        std::ostringstream os;
        os << family_name(family) << ": Laplace transform not representable at s = " << s;
        fail(ErrorKind::NumericalOverflow, os.str());
    }
    return t;
}

bool has_pmf(const FrailtyFamily& family) noexcept {
    return !std::holds_alternative<Addams>(family) && !std::holds_alternative<GammaFrailty>(family);
}

bool has_finite_support(const FrailtyFamily& family) noexcept {
    if (std::holds_alternative<Binomial>(family) || std::holds_alternative<KPoint>(family)) return true;
    if (const auto* s = std::get_if<Shifted>(&family)) return std::holds_alternative<Binomial>(s->inner);
    return false;
}

double pmf(const FrailtyFamily& family, double z) {
    double k = 0.0;
    return std::visit(
        overloaded{
            [&](const NegBin& nb) { return lattice_index(z, 0.0, k) ? shiftable_pmf_index(nb, k) : 0.0; },
            [&](const NegBinPositive& nb) {
                return lattice_index(z, nb.nu, k) ? shiftable_pmf_index(NegBin{nb.pi, double(nb.nu)}, k)
                                                  : 0.0;
            },
            [&](const Binomial& b) { return lattice_index(z, 0.0, k) ? shiftable_pmf_index(b, k) : 0.0; },
            [&](const Poisson& p) { return lattice_index(z, 0.0, k) ? shiftable_pmf_index(p, k) : 0.0; },
            [&](const Shifted& s) { return lattice_index(z, s.p, k) ? shiftable_pmf_index(s.inner, k) : 0.0; },
            [&](const ZeroModifiedPoisson& f) {
                if (!lattice_index(z, 0.0, k)) return 0.0;
                if (k == 0.0) return f.phi * std::exp(-f.eta);
                return zmp_scale(f) * std::exp(poisson_log_pmf(f.eta, k));
            },
            [&](const Addams&) -> double {
                fail(ErrorKind::Unsupported, "addams: pmf is not available");
            },
            [&](const KPoint& kp) {
                for (std::size_t i = 0; i < kp.support.size(); ++i)
                    if (std::abs(kp.support[i] - z) <= 1e-12 * std::max(1.0, std::abs(z)))
                        return kp.probs[i];
                return 0.0;
            },
            [&](const GammaFrailty&) -> double {
                fail(ErrorKind::Unsupported, "gamma: continuous distribution has no pmf");
            },
        },
        family);
}

Moments moments(const FrailtyFamily& family) {
    return std::visit(
        overloaded{
            [](const NegBin& nb) { return shiftable_moments(nb); },
            [](const NegBinPositive& nb) {
                const double q = 1.0 - nb.pi;
                return Moments{nb.nu / nb.pi, nb.nu * q / (nb.pi * nb.pi)};
            },
            [](const Binomial& b) { return shiftable_moments(b); },
            [](const Poisson& p) { return shiftable_moments(p); },
            [](const Shifted& s) {
                auto m = shiftable_moments(s.inner);
                m.mean += s.p;
                return m;
            },
            [](const ZeroModifiedPoisson& z) {
                const double a = zmp_scale(z);
                const double mean = a * z.eta;
                // E(Z^2) - E(Z)^2 = A eta (1 + eta) - A^2 eta^2
                return Moments{mean, a * z.eta * (1.0 + z.eta * (1.0 - a))};
            },
            [&family](const Addams&) {
                const auto t = laplace(family, 0.0);
                return Moments{-t.l1, t.l2 - t.l1 * t.l1};
            },
            [](const KPoint& k) {
                double mean = 0.0;
                for (std::size_t i = 0; i < k.support.size(); ++i) mean += k.probs[i] * k.support[i];
                double var = 0.0;
                for (std::size_t i = 0; i < k.support.size(); ++i) {
                    const double d = k.support[i] - mean;
                    var += k.probs[i] * d * d;
                }
                return Moments{mean, var};
            },
            [](const GammaFrailty& g) { return Moments{g.mean, g.variance}; },
        },
        family);
}

double smallest_support_point(const FrailtyFamily& family) {
    return std::visit(overloaded{
                          [](const NegBin&) { return 0.0; },
                          [](const NegBinPositive& nb) { return double(nb.nu); },
                          [](const Binomial&) { return 0.0; },
                          [](const Poisson&) { return 0.0; },
                          [](const Shifted& s) { return s.p; },
                          [](const ZeroModifiedPoisson& z) { return z.phi > 0.0 ? 0.0 : 1.0; },
                          [](const Addams& a) -> double {
                              if (a.alpha > 0.0) return 0.0;
                              if (a.alpha < 0.0) return -a.alpha / (a.gamma - a.alpha);
                              fail(ErrorKind::Unsupported, "addams: alpha = 0 is continuous");
                          },
                          [](const KPoint& k) { return k.support.front(); },
                          [](const GammaFrailty&) -> double {
                              fail(ErrorKind::Unsupported, "gamma: continuous distribution");
                          },
                      },
                      family);
}

DiscreteSupport enumerate_support(const FrailtyFamily& family, double tail_mass) {
    if (!(tail_mass > 0.0)) out_of_range(family_name(family), "tail_mass", tail_mass, "> 0");
    return std::visit(
        overloaded{
            [&](const NegBin& nb) { return shiftable_support(nb, 0.0, tail_mass); },
            [&](const NegBinPositive& nb) {
                return shiftable_support(NegBin{nb.pi, double(nb.nu)}, nb.nu, tail_mass);
            },
            [&](const Binomial& b) { return shiftable_support(b, 0.0, tail_mass); },
            [&](const Poisson& p) { return shiftable_support(p, 0.0, tail_mass); },
            [&](const Shifted& s) { return shiftable_support(s.inner, s.p, tail_mass); },
            [&](const ZeroModifiedPoisson& z) {
                // Poisson tail with the z >= 1 masses scaled by A.
                const double a = zmp_scale(z);
                auto base = shiftable_support(Poisson{z.eta}, 0.0, tail_mass / std::max(1.0, a));
                DiscreteSupport out;
                out.truncated = true;
                out.tail_mass = a * base.tail_mass;
                if (z.phi > 0.0) {
                    out.z.push_back(0.0);
                    out.mass.push_back(z.phi * std::exp(-z.eta));
                }
                for (std::size_t i = 1; i < base.size(); ++i) {
                    out.z.push_back(base.z[i]);
                    out.mass.push_back(a * base.mass[i]);
                }
                return out;
            },
            [&](const Addams&) -> DiscreteSupport {
                fail(ErrorKind::Unsupported, "addams: pmf is not available");
            },
            [&](const KPoint& k) {
                DiscreteSupport out;
                out.z = k.support;
                out.mass = k.probs;
                return out;
            },
            [&](const GammaFrailty&) -> DiscreteSupport {
                fail(ErrorKind::Unsupported, "gamma: continuous distribution has no pmf");
            },
        },
        family);
}

}  // namespace frailty
