#ifndef HILBERT_ESTIMATORS_HPP
#define HILBERT_ESTIMATORS_HPP

#include <memory>
#include <vector>

#include "hilbert/volume.hpp"

namespace hilbert {

/// Least-squares record for tail-window fits. `value` is the headline
/// estimate of the op that produced the fit; non-convergent fits (residual
/// RMS above the threshold used by the caller) are flagged rather than
/// silently trusted.
struct SlopeFit {
    std::vector<double> abscissa;
    std::vector<double> ordinate;
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    int window_begin = 0; // ladder index where the tail window starts
    double value = 0.0;
    bool converged = true;
};

/// Plain least squares of ys against xs; fills slope/intercept/residuals.
SlopeFit least_squares_fit(const std::vector<double>& xs, const std::vector<double>& ys);

struct AsvolEstimate {
    double value = 0.0;           // Richardson limit from asymptotic balls
    double from_asymptotic = 0.0; // same as value
    double from_metric = 0.0;     // Richardson limit from metric balls
    double sandwich_gap = 0.0;    // relative disagreement of the two routes
    std::vector<double> ladder;
    std::vector<double> vol_asymptotic;
    std::vector<double> vol_metric;
    VolumeKind kind = VolumeKind::busemann;
};

/// Asymptotic volume lim Vol(B(o,R))/R^d of a polytopal body: tail fit of
/// V/R^d against 1/R (Richardson) for both ball kinds.
/// Throws NonPolytopeBody for non-polytopal bodies (the limit diverges).
AsvolEstimate asvol_estimate(const ConvexBody& body, VolumeKind kind,
                             const std::vector<double>& ladder,
                             const VolumeBudget& budget = {});

/// Volume entropy via local slopes of log Vol(B(o,R)) extrapolated in 1/R
/// over the tail window R >= window_min. A plain logV-vs-R slope cannot
/// separate polynomial from exponential growth at desk-scale radii; the
/// extrapolation recovers 0 exactly for polytopes and the true rate for
/// smooth bodies.
SlopeFit entropy_estimate(const ConvexBody& body, VolumeKind kind,
                          const std::vector<double>& ladder,
                          const VolumeBudget& budget = {}, double window_min = 6.0,
                          double residual_threshold = 0.05);

/// Inscribed polytope within Hausdorff distance eps: convex hull of a
/// boundary net with angular spacing ~ sqrt(8 eps / L), verified post hoc
/// and refined by halving until the bound holds.
/// Throws EpsilonTooSmall when the required net exceeds the vertex budget.
std::shared_ptr<const Polytope> approximate_polytope(const ConvexBody& body, double eps,
                                                     long vertex_budget = 0);

/// Flag count of the approximating polytope: an upper proxy for the least
/// flag number a(eps, body) with the right growth exponent.
long long flag_number(const ConvexBody& body, double eps);

/// Slope of log flag_number against -log eps over the tail window.
SlopeFit flag_approx_estimate(const ConvexBody& body, const std::vector<double>& eps_ladder,
                              double residual_threshold = 0.25);

struct FlagRatioReport {
    long long flags = 0;
    double expected_ratio = 0.0; // |Flags| / (d+1)!
    double asvol_body = 0.0;
    double asvol_simplex = 0.0;
    double measured_ratio = 0.0;
    double rel_discrepancy = 0.0; // measured vs expected
    std::vector<double> cone_values; // per-flag Vol(AsB cap S)/R^d at R_max
    double cone_expected = 0.0;      // asvol_simplex / (d+1)!
    double cone_max_rel_dev = 0.0;
    VolumeKind kind = VolumeKind::busemann;
    double r_max = 0.0;
};

/// Checks Asvol(P) = |Flags(P)|/(d+1)! * Asvol(simplex) with a same-budget
/// reference simplex, plus the per-flag-simplex cone volumes.
FlagRatioReport verify_flag_ratio(const ConvexBody& body, VolumeKind kind, double r_max,
                                  const VolumeBudget& budget = {}, bool per_cone = true);

struct EntropyIdentityReport {
    SlopeFit entropy;
    SlopeFit flag_approx;
    double ent = 0.0;
    double twice_flag_approx = 0.0;
    double ratio = 0.0;
    double uncertainty = 0.0;
    bool entropy_bound_ok = false; // ent <= d - 1 + tolerance
};

/// Runs entropy_estimate and flag_approx_estimate and reports
/// ent / (2 flagapprox) with a combined uncertainty.
EntropyIdentityReport verify_entropy_identity(const ConvexBody& body,
                                              const std::vector<double>& r_ladder,
                                              const std::vector<double>& eps_ladder,
                                              const VolumeBudget& budget = {},
                                              double window_min = 6.0);

/// Default ladders: R in {1, 1.5, ..., 10}; eps = 2^-4 ... 2^-14 in 2D and
/// 2^-4 ... 2^-11 in 3D (vertex budgets cap the 3D nets).
std::vector<double> default_radius_ladder(double r_max = 10.0);
std::vector<double> default_epsilon_ladder(int dim);

} // namespace hilbert

#endif
