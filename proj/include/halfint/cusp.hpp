#pragma once

// Numerical Fourier expansions at the cusps -1/2 and 0, extracted from the
// exact expansion at infinity by evaluating the transformation formulas on a
// horizontal contour and inverting with an FFT.
//
// With f(z) = sum a(n) e(nz) (weight ell+1/2 on Gamma0(4)):
//   cusp 0:    h(z) = (-2iz)^(-(ell+1/2)) f(-1/(4z))      = sum lh(n) n^(ell/2-1/4) e(nz)
//   cusp -1/2: g(z) = (-8z+1)^(-(ell+1/2)) f(4z/(-8z+1))  = sum lg(n) n^(ell/2-1/4) e(nz)
// (g here is the expansion series itself; the conventional 2^(ell+1/2)
// prefactor is kept out of the coefficients.)
//
// Error bounds are worst-case, propagated per sample and per coefficient:
// series tail + phase/accumulation rounding at each sample, averaged through
// the DFT, then amplified by e^(2 pi n y0) and combined with an aliasing
// envelope term.

#include "halfint/expsums.hpp"
#include "halfint/qseries.hpp"

namespace halfint::cusp {

struct ContourSpec {
    double y0 = 0.25;        // height of the sampling segment
    int S = 4096;            // samples per period (power of two)
    int n_max = 50;          // coefficients to extract, <= S/4
    double tail_tol = 1e-18; // absolute series-truncation target per sample
};

struct EvalResult {
    Cx value;
    double abs_err;
};

// Envelope |a(n)| <= A * n^s valid on and beyond the computed range; the
// exponent carries the rho = 1/2 safety margin plus divisor-growth headroom.
struct TailEnvelope {
    double A;
    double s;
};

TailEnvelope coefficient_envelope(const qseries::EtaThetaForm& form);

// f at a general point of the upper half-plane, with a certified tail bound.
EvalResult eval_form(Cx z, const qseries::EtaThetaForm& form, double tail_tol);

// The two cusp transforms (principal branch powers; Re(-2iz) = 2 Im z > 0,
// and -8z+1 has Im = -8 Im z != 0, so both branches are continuous on any
// horizontal contour).
EvalResult cusp_zero_value(Cx z, const qseries::EtaThetaForm& form, double tail_tol);
EvalResult cusp_half_value(Cx z, const qseries::EtaThetaForm& form, double tail_tol);

enum class CuspLabel { infinity, half, zero };

struct ExtractedRow {
    double lambda = 0.0;   // real part of the recovered coefficient
    double abs_err = 0.0;  // certified worst-case bound
    double im = 0.0;       // imaginary residue (should sit below abs_err)
};

// rows[n] for n = 1..n_max (index 0 unused).
std::vector<ExtractedRow> extract_cusp_coeffs(CuspLabel which, const ContourSpec& contour,
                                              const qseries::EtaThetaForm& form);

// ---------------------------------------------------------------------------
// The three coefficient sequences bundled for the Voronoi/sign-change layers.
// lambda_f is exact; lambda_g, lambda_h are numeric with per-row bounds.
//
// After extraction the builder tests whether the numeric rows are a constant
// multiple of lambda_f (the ambient space here is one-dimensional, so they
// should be).  When every extracted row validates against its own error
// bound, the proportionality is recorded and rows beyond the extraction
// range are served as c * lambda_f(n) with a correspondingly derived bound.
// ---------------------------------------------------------------------------
struct ProportionalFit {
    bool valid = false;
    double c = 0.0;      // fitted constant (snapped to an integer when within error)
    double c_err = 0.0;  // 10 sigma of the weighted fit
};

struct CuspTriple {
    int ell = 4;
    i64 N = 0;       // range of exact lambda_f
    i64 N_cusp = 0;  // extraction range of the numeric rows
    std::vector<double> lambda_f;          // index 0 unused
    std::vector<ExtractedRow> rows_g, rows_h;
    ProportionalFit prop_g, prop_h;

    bool available(expsums::ParityClass cls, i64 n) const;
    double lambda_at(expsums::ParityClass cls, i64 n) const;  // throws when unavailable
    double err_at(expsums::ParityClass cls, i64 n) const;
};

CuspTriple build_cusp_triple(const qseries::EtaThetaForm& form, const ContourSpec& contour);

// Assemble a triple from already-extracted rows (cache reload path).
CuspTriple assemble_triple(const qseries::EtaThetaForm& form, std::vector<ExtractedRow> rows_g,
                           std::vector<ExtractedRow> rows_h, i64 n_cusp);

ProportionalFit fit_proportional_rows(const std::vector<ExtractedRow>& rows,
                                      const std::vector<double>& lambda_f, i64 n_cusp);

// Triple with synthetic coefficient data (tests, negative controls).
CuspTriple synthetic_triple(int ell, std::vector<double> lambda_f_values);

}  // namespace halfint::cusp
