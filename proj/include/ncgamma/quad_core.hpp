#ifndef NCGAMMA_QUAD_CORE_HPP
#define NCGAMMA_QUAD_CORE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "ncgamma/errors.hpp"
#include "ncgamma/signed_log.hpp"

namespace ncgamma::detail {

// 15-point Kronrod rule with embedded 7-point Gauss rule (nodes on [-1,1]).
inline constexpr double kGK15Nodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898,  0.0,                0.207784955007898,
     0.405845151377397,  0.586087235467691,  0.741531185599394,
     0.864864423359769,  0.949107912342759,  0.991455371120813};
inline constexpr double kGK15WeightsK[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
inline constexpr double kGK15WeightsG[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

struct PanelEstimate {
    double integral = 0.0;
    double error = 0.0;
};

template <class F>
PanelEstimate gk15_panel(F&& f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    double k_sum = 0.0, g_sum = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double v = f(c + h * kGK15Nodes[i]);
        k_sum += kGK15WeightsK[i] * v;
        if (i % 2 == 1) g_sum += kGK15WeightsG[i / 2] * v;
    }
    PanelEstimate e;
    e.integral = k_sum * h;
    const double diff = std::fabs((k_sum - g_sum) * h);
    // standard QUADPACK error sharpening
    e.error = diff;
    const double scale = std::fabs(k_sum * h);
    if (scale > 0 && diff > 0) {
        const double r = std::pow(200.0 * diff / scale, 1.5);
        if (r < 1.0) e.error = scale * r;
    }
    return e;
}

/// Globally adaptive Gauss-Kronrod bisection on [a, b].
/// Stops when sum of panel error estimates <= max(abs_tol, rel_tol*|I|).
template <class F>
double gk_adaptive(F&& f, double a, double b, double abs_tol, double rel_tol,
                   int max_subdivisions,
                   const std::vector<double>& split_hints = {}) {
    struct Panel {
        double a, b;
        PanelEstimate est;
    };
    std::vector<Panel> panels;
    std::vector<double> cuts{a, b};
    for (double s : split_hints)
        if (s > a && s < b) cuts.push_back(s);
    std::sort(cuts.begin(), cuts.end());
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        panels.push_back({cuts[i], cuts[i + 1], gk15_panel(f, cuts[i], cuts[i + 1])});

    for (int iter = 0; iter < max_subdivisions; ++iter) {
        double total = 0.0, err = 0.0;
        size_t worst = 0;
        double worst_err = -1.0;
        for (size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].est.integral;
            err += panels[i].est.error;
            if (panels[i].est.error > worst_err) {
                worst_err = panels[i].est.error;
                worst = i;
            }
        }
        if (err <= std::max(abs_tol, rel_tol * std::fabs(total))) return total;
        Panel p = panels[worst];
        const double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b)) {
            // interval no longer splittable in double precision
            panels[worst].est.error = 0.0;
            continue;
        }
        panels[worst] = {p.a, m, gk15_panel(f, p.a, m)};
        panels.push_back({m, p.b, gk15_panel(f, m, p.b)});
    }
    double total = 0.0, err = 0.0;
    for (const auto& p : panels) {
        total += p.est.integral;
        err += p.est.error;
    }
    if (err > std::max(abs_tol, rel_tol * std::fabs(total)) * 1e3)
        throw NonConvergence("gk_adaptive: subdivision budget exhausted");
    return total;
}

/// Integrates exp(log_f(v)) over [a, b] for a non-negative integrand whose
/// magnitude may be far outside double range.  The integrand is rescaled by
/// its maximum (located by a coarse scan plus golden-section refinement)
/// before the adaptive pass.  Returns the integral as a SignedLogValue.
template <class LogF>
SignedLogValue integrate_log_scaled(LogF&& log_f, double a, double b,
                                    double rel_tol, int max_subdivisions,
                                    int scan_points = 33) {
    const double inf = std::numeric_limits<double>::infinity();
    double best_v = a, best_g = -inf;
    for (int i = 0; i <= scan_points; ++i) {
        const double v = a + (b - a) * i / scan_points;
        const double g = log_f(v);
        if (g > best_g) {
            best_g = g;
            best_v = v;
        }
    }
    if (best_g == -inf) return SignedLogValue::zero();

    // golden-section refinement around the scan maximum
    {
        const double phi = 0.6180339887498949;
        const double step = (b - a) / scan_points;
        double lo = std::max(a, best_v - step), hi = std::min(b, best_v + step);
        double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
        double f1 = log_f(x1), f2 = log_f(x2);
        for (int it = 0; it < 40 && hi - lo > 1e-12 * (b - a); ++it) {
            if (f1 < f2) {
                lo = x1; x1 = x2; f1 = f2;
                x2 = lo + phi * (hi - lo); f2 = log_f(x2);
            } else {
                hi = x2; x2 = x1; f2 = f1;
                x1 = hi - phi * (hi - lo); f1 = log_f(x1);
            }
        }
        if (f1 > best_g) { best_g = f1; best_v = x1; }
        if (f2 > best_g) { best_g = f2; best_v = x2; }
    }

    const double peak = best_g;
    auto scaled = [&](double v) {
        const double g = log_f(v);
        return (g == -inf) ? 0.0 : std::exp(g - peak);
    };
    std::vector<double> hints{best_v};
    const double val = gk_adaptive(scaled, a, b, 1e-300, rel_tol,
                                   max_subdivisions, hints);
    if (!(val > 0)) return SignedLogValue::zero();
    return SignedLogValue::from_log(peak + std::log(val), +1);
}

}  // namespace ncgamma::detail

#endif
