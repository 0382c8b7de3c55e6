#include "halfint/cusp.hpp"

#include <algorithm>
#include <cmath>

#include "halfint/fft.hpp"

namespace halfint::cusp {

using qseries::EtaThetaForm;

namespace {

constexpr double EPS = 2.220446049250313e-16;

double norm_exponent(int ell) { return ell / 2.0 - 0.25; }

// Sum_{n > n0} A n^s x^n bounded by the first term over a geometric tail;
// requires the terms to be decreasing at n0 (n0 > s / ln(1/x)).
double envelope_tail(const TailEnvelope& env, double x, i64 n0) {
    double ratio = x * std::pow((static_cast<double>(n0) + 2.0) / (static_cast<double>(n0) + 1.0), env.s);
    if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
    double first = env.A * std::pow(static_cast<double>(n0) + 1.0, env.s) * std::pow(x, static_cast<double>(n0) + 1.0);
    return first / (1.0 - ratio);
}

}  // namespace

TailEnvelope coefficient_envelope(const EtaThetaForm& form) {
    if (form.env_A > 0.0) return {form.env_A, form.env_s};
    TailEnvelope env;
    env.s = norm_exponent(form.ell) + 0.75;  // rho = 1/2 safety plus divisor headroom
    double A = 1.0;
    for (i64 n = 1; n <= form.N; ++n) {
        double an = std::fabs(mpz_get_d(form.series.a[static_cast<size_t>(n)].get_mpz_t()));
        A = std::max(A, an / std::pow(static_cast<double>(n), env.s));
    }
    env.A = 2.0 * A;
    return env;
}

EvalResult eval_form(Cx z, const EtaThetaForm& form, double tail_tol) {
    double y = z.imag();
    if (y <= 0.0) throw std::invalid_argument("eval_form: need Im z > 0");
    TailEnvelope env = coefficient_envelope(form);
    double x = std::exp(-2.0 * PI * y);
    double L = 2.0 * PI * y;

    i64 n_monotone = static_cast<i64>(env.s / L) + 1;
    KahanSumCx acc;
    KahanSum abs_acc;
    i64 n_cut = 0;
    double tail = std::numeric_limits<double>::infinity();
    for (i64 n = 1; n <= form.N; ++n) {
        double an = form.coeff[static_cast<size_t>(n)];
        if (an != 0.0) {
            double r = std::exp(-2.0 * PI * y * static_cast<double>(n));
            double theta = 2.0 * PI * (static_cast<double>(n) * z.real() -
                                       std::floor(static_cast<double>(n) * z.real()));
            Cx term = an * std::polar(r, theta);
            acc.add(term);
            abs_acc.add(std::fabs(an) * r);
        }
        if (n >= n_monotone && (n & 7) == 0) {
            tail = envelope_tail(env, x, n);
            if (tail <= tail_tol) { n_cut = n; break; }
        }
    }
    if (n_cut == 0)
        throw std::invalid_argument("eval_form: requested tolerance unattainable at this height");

    double phase_err = 2.0 * PI * static_cast<double>(n_cut) * (std::fabs(z.real()) + 1.0) * EPS;
    double abs_err = tail + (4.0 * EPS + phase_err) * abs_acc.value();
    return {acc.value(), abs_err};
}

EvalResult cusp_zero_value(Cx z, const EtaThetaForm& form, double tail_tol) {
    if (z.imag() <= 0.0) throw std::invalid_argument("cusp_zero_value: need Im z > 0");
    Cx w = -1.0 / (4.0 * z);
    EvalResult ev = eval_form(w, form, tail_tol);
    Cx pref = std::pow(Cx(0.0, -2.0) * z, -(form.ell + 0.5));
    double ap = std::abs(pref);
    return {pref * ev.value, ap * ev.abs_err + 8.0 * EPS * ap * std::abs(ev.value)};
}

EvalResult cusp_half_value(Cx z, const EtaThetaForm& form, double tail_tol) {
    if (z.imag() <= 0.0) throw std::invalid_argument("cusp_half_value: need Im z > 0");
    Cx den = -8.0 * z + 1.0;
    if (den.imag() == 0.0 && den.real() <= 0.0)
        throw std::invalid_argument("cusp_half_value: branch cut hit");
    Cx w = 4.0 * z / den;
    EvalResult ev = eval_form(w, form, tail_tol);
    Cx pref = std::pow(den, -(form.ell + 0.5));
    double ap = std::abs(pref);
    return {pref * ev.value, ap * ev.abs_err + 8.0 * EPS * ap * std::abs(ev.value)};
}

std::vector<ExtractedRow> extract_cusp_coeffs(CuspLabel which, const ContourSpec& contour,
                                              const EtaThetaForm& form) {
    int S = contour.S;
    if (S < 4 || (S & (S - 1)) != 0) throw std::invalid_argument("extract_cusp_coeffs: S must be a power of two");
    if (contour.n_max < 1 || contour.n_max > S / 4)
        throw std::invalid_argument("extract_cusp_coeffs: need 1 <= n_max <= S/4");
    if (contour.y0 <= 0.0) throw std::invalid_argument("extract_cusp_coeffs: need y0 > 0");

    std::vector<Cx> samples(static_cast<size_t>(S));
    KahanSum err_sum, mag_sum;

    if (which == CuspLabel::infinity) {
        // f on the lattice points k/S + i y0: phases n*k/S are exact rationals,
        // so use the S-th root table directly.
        auto roots = unit_roots(S);
        TailEnvelope env = coefficient_envelope(form);
        double x = std::exp(-2.0 * PI * contour.y0);
        double L = 2.0 * PI * contour.y0;
        i64 n_monotone = static_cast<i64>(env.s / L) + 1;
        i64 n_cut = 0;
        double tail = 0.0;
        for (i64 n = n_monotone; n <= form.N; ++n) {
            tail = envelope_tail(env, x, n);
            if (tail <= contour.tail_tol) { n_cut = n; break; }
        }
        if (n_cut == 0) throw std::invalid_argument("extract_cusp_coeffs: tolerance unattainable");
        std::vector<double> radial(static_cast<size_t>(n_cut + 1));
        for (i64 n = 1; n <= n_cut; ++n)
            radial[static_cast<size_t>(n)] = std::exp(-2.0 * PI * contour.y0 * static_cast<double>(n));
        for (int k = 0; k < S; ++k) {
            KahanSumCx acc;
            KahanSum abs_acc;
            for (i64 n = 1; n <= n_cut; ++n) {
                double an = form.coeff[static_cast<size_t>(n)];
                if (an == 0.0) continue;
                Cx term = an * radial[static_cast<size_t>(n)] *
                          roots[static_cast<size_t>((n * k) % S)];
                acc.add(term);
                abs_acc.add(std::fabs(an) * radial[static_cast<size_t>(n)]);
            }
            samples[static_cast<size_t>(k)] = acc.value();
            double e = tail + 6.0 * EPS * abs_acc.value();
            err_sum.add(e);
            mag_sum.add(std::abs(acc.value()));
        }
    } else {
        for (int k = 0; k < S; ++k) {
            Cx z{static_cast<double>(k) / S, contour.y0};
            EvalResult ev = (which == CuspLabel::zero) ? cusp_zero_value(z, form, contour.tail_tol)
                                                       : cusp_half_value(z, form, contour.tail_tol);
            samples[static_cast<size_t>(k)] = ev.value;
            err_sum.add(ev.abs_err);
            mag_sum.add(std::abs(ev.value));
        }
    }

    // Fhat[n] = (1/S) sum_k F_k e(-nk/S)
    fft_pow2(samples);
    double inv_s = 1.0 / static_cast<double>(S);
    double log2s = std::log2(static_cast<double>(S));
    double dft_err = inv_s * err_sum.value() + (2.0 * log2s + 4.0) * EPS * inv_s * mag_sum.value();

    TailEnvelope env = coefficient_envelope(form);
    double expo = norm_exponent(form.ell);
    std::vector<ExtractedRow> rows(static_cast<size_t>(contour.n_max + 1));
    for (i64 n = 1; n <= contour.n_max; ++n) {
        Cx hatn = samples[static_cast<size_t>(n)] * inv_s;
        double amp = std::exp(2.0 * PI * static_cast<double>(n) * contour.y0);
        double npow = std::pow(static_cast<double>(n), expo);
        // aliasing: frequencies n + jS fold onto n; bound with the envelope
        double alias = envelope_tail(env, std::exp(-2.0 * PI * contour.y0), n + S - 1);
        ExtractedRow row;
        row.lambda = hatn.real() * amp / npow;
        row.im = hatn.imag() * amp / npow;
        row.abs_err = (dft_err + alias) * amp / npow;
        rows[static_cast<size_t>(n)] = row;
    }
    return rows;
}

ProportionalFit fit_proportional_rows(const std::vector<ExtractedRow>& rows,
                                      const std::vector<double>& lambda_f, i64 n_cusp) {
    ProportionalFit fit;
    // weighted least squares for rows where the error is small against lambda_f
    double swxy = 0.0, swxx = 0.0;
    int used = 0;
    for (i64 n = 1; n <= n_cusp; ++n) {
        double lf = lambda_f[static_cast<size_t>(n)];
        const auto& r = rows[static_cast<size_t>(n)];
        if (lf == 0.0 || r.abs_err <= 0.0) continue;
        if (r.abs_err > 0.05 * std::fabs(lf) * std::max(1.0, std::fabs(r.lambda / lf))) continue;
        double w = 1.0 / (r.abs_err * r.abs_err);
        swxy += w * lf * r.lambda;
        swxx += w * lf * lf;
        ++used;
    }
    if (used < 3 || swxx == 0.0) return fit;
    double c = swxy / swxx;
    double sigma = 1.0 / std::sqrt(swxx);
    double c_err = 10.0 * sigma + 1e-14 * std::fabs(c);
    // snap to an integer constant when the fit allows it
    double rounded = std::round(c);
    if (std::fabs(c - rounded) <= c_err && rounded != 0.0) c = rounded;
    // validate every extracted row against its own certified bound
    for (i64 n = 1; n <= n_cusp; ++n) {
        const auto& r = rows[static_cast<size_t>(n)];
        double lf = lambda_f[static_cast<size_t>(n)];
        double bound = r.abs_err + std::fabs(lf) * c_err + 1e-15;
        if (std::fabs(r.lambda - c * lf) > bound) return fit;  // not proportional
        if (std::fabs(r.im) > bound) return fit;
    }
    fit.valid = true;
    fit.c = c;
    fit.c_err = c_err;
    return fit;
}

bool CuspTriple::available(expsums::ParityClass cls, i64 n) const {
    if (n < 1) return false;
    if (cls == expsums::ParityClass::div4) return n <= N;
    const ProportionalFit& fit = (cls == expsums::ParityClass::odd_mod) ? prop_h : prop_g;
    if (n <= N_cusp) return true;
    return fit.valid && n <= N;
}

double CuspTriple::lambda_at(expsums::ParityClass cls, i64 n) const {
    if (!available(cls, n)) throw std::out_of_range("CuspTriple: coefficient not available");
    if (cls == expsums::ParityClass::div4) return lambda_f[static_cast<size_t>(n)];
    const auto& rows = (cls == expsums::ParityClass::odd_mod) ? rows_h : rows_g;
    const ProportionalFit& fit = (cls == expsums::ParityClass::odd_mod) ? prop_h : prop_g;
    if (fit.valid) {
        double prop_err = std::fabs(lambda_f[static_cast<size_t>(n)]) * fit.c_err;
        if (n > N_cusp || prop_err < rows[static_cast<size_t>(n)].abs_err)
            return fit.c * lambda_f[static_cast<size_t>(n)];
    }
    return rows[static_cast<size_t>(n)].lambda;
}

double CuspTriple::err_at(expsums::ParityClass cls, i64 n) const {
    if (!available(cls, n)) throw std::out_of_range("CuspTriple: coefficient not available");
    if (cls == expsums::ParityClass::div4) return 0.0;
    const auto& rows = (cls == expsums::ParityClass::odd_mod) ? rows_h : rows_g;
    const ProportionalFit& fit = (cls == expsums::ParityClass::odd_mod) ? prop_h : prop_g;
    if (fit.valid) {
        double prop_err = std::fabs(lambda_f[static_cast<size_t>(n)]) * fit.c_err + 1e-15;
        if (n > N_cusp || prop_err < rows[static_cast<size_t>(n)].abs_err) return prop_err;
    }
    return rows[static_cast<size_t>(n)].abs_err;
}

CuspTriple assemble_triple(const EtaThetaForm& form, std::vector<ExtractedRow> rows_g,
                           std::vector<ExtractedRow> rows_h, i64 n_cusp) {
    CuspTriple triple;
    triple.ell = form.ell;
    triple.N = form.N;
    triple.N_cusp = n_cusp;
    triple.lambda_f = form.lambda;
    triple.rows_g = std::move(rows_g);
    triple.rows_h = std::move(rows_h);
    triple.prop_g = fit_proportional_rows(triple.rows_g, triple.lambda_f, triple.N_cusp);
    triple.prop_h = fit_proportional_rows(triple.rows_h, triple.lambda_f, triple.N_cusp);
    return triple;
}

CuspTriple build_cusp_triple(const EtaThetaForm& form, const ContourSpec& contour) {
    return assemble_triple(form, extract_cusp_coeffs(CuspLabel::half, contour, form),
                           extract_cusp_coeffs(CuspLabel::zero, contour, form), contour.n_max);
}

CuspTriple synthetic_triple(int ell, std::vector<double> lambda_f_values) {
    CuspTriple triple;
    triple.ell = ell;
    triple.N = static_cast<i64>(lambda_f_values.size()) - 1;
    triple.N_cusp = triple.N;
    triple.lambda_f = std::move(lambda_f_values);
    triple.rows_g.assign(triple.lambda_f.size(), {});
    triple.rows_h.assign(triple.lambda_f.size(), {});
    for (size_t n = 1; n < triple.lambda_f.size(); ++n) {
        triple.rows_g[n] = {triple.lambda_f[n], 1e-12, 0.0};
        triple.rows_h[n] = {triple.lambda_f[n], 1e-12, 0.0};
    }
    triple.prop_g = {true, 1.0, 1e-12};
    triple.prop_h = {true, 1.0, 1e-12};
    return triple;
}

}  // namespace halfint::cusp
