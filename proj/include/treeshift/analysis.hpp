#ifndef TREESHIFT_ANALYSIS_HPP
#define TREESHIFT_ANALYSIS_HPP

#include <span>
#include <string>
#include <vector>

#include "treeshift/multiplier.hpp"
#include "treeshift/oracle.hpp"
#include "treeshift/shift.hpp"

namespace treeshift {

// Horizon tail window [ceil(N/2), N]: the stand-in for limits superior and
// inferior on a finite truncation. Estimates quote the window extremes so
// a caller can see how settled the sequence is.
struct TailWindow {
  int lo = 0;
  int hi = 0;
};
TailWindow tail_window(int horizon);

// Per-depth reciprocal-beta slice sums c_k = sum_{|v|=k} 1/beta_v and the
// radius estimate 1 / max_{window} c_k^(1/2k). A point w admits a bounded
// evaluation exactly when sum_k c_k |w|^(2k) converges, so the radius is
// the reciprocal root-test limit of the slice sums.
struct BpeProfile {
  std::vector<double> c;        // k = 0..N
  double radius = 0.0;          // tail-window estimate at full horizon
  double window_low = 0.0;      // min over window of c_k^(1/2k)
  double window_high = 0.0;     // max over window (defines the radius)
  double window_spread_rel = 0.0;
  bool unstable = false;        // spread above 1e-3: sequence not settled
  double radius_at_half = 0.0;  // same estimate pretending the horizon is N/2
  double half_gap_rel = 0.0;    // truncation diagnostic
};
BpeProfile bpe_profile(const ShiftOperator& S, const ExecPolicy& exec = {});

enum class BpeVerdict { kInside, kOutside, kBoundaryIndeterminate };
std::string to_string(BpeVerdict v);

struct BpeDecision {
  BpeVerdict verdict = BpeVerdict::kBoundaryIndeterminate;
  double ratio = 0.0;  // |w| / radius
  std::vector<double> partial_sums;  // head of sum c_k |w|^(2k)
};
// Verdict depends only on |w| (evaluation discs are circular). Inside the
// guard band around the estimated radius the answer is indeterminate:
// the truncation cannot distinguish the boundary.
BpeDecision is_bpe(const BpeProfile& profile, Complex w, double guard_band = 1e-3);

// k_w(v) = conj(w)^{depth(v)} / beta_v on every stored vertex (0^0 = 1),
// the reproducing kernel of point evaluation at w.
struct EvaluationKernel {
  Complex w = 0.0;
  std::vector<Complex> values;
  bool radius_warning = false;  // |w| at or past the estimated radius
};
EvaluationKernel evaluation_kernel(const ShiftOperator& S, Complex w,
                                   const BpeProfile* profile = nullptr);

// V_w(f) = sum_v f(v) w^{depth(v)} over the support.
Complex point_evaluation(const DirectedTree& tree, const TreeVector& f, Complex w);

// max over vertices of depth <= interior_depth of
//   |(S* k_w)(v) - conj(w) k_w(v)| / (1 + |k_w(v)|),
// the scale-normalized eigenvector defect of the kernel. Requires unit
// child sums (throws NotNormalizedError otherwise).
double adjoint_eigen_residual(const ShiftOperator& S, Complex w, int interior_depth);

// |V_w(G_c f) - c(w) V_w(f)| / (1 + |c(w) V_w(f)|): the multiplier
// eigenvalue identity seen through point evaluation. Requires unit child
// sums and support shallow enough that the multiplier action is fully
// stored (TruncationError otherwise).
double intertwining_residual(const ShiftOperator& S, const Symbol& c,
                             const TreeVector& f, Complex w);

// Same defect for the dense multiplier adjoint: max scale-normalized
// residual of M* k_w against conj(c(w)) k_w over depths the dense
// truncation represents exactly.
double multiplier_adjoint_eigen_residual(const ShiftOperator& S, const Symbol& c,
                                         Complex w,
                                         std::size_t dense_budget = kDenseBudget);

// One root-to-frontier path: samples
//   a_k = (sqrt(beta_{v_k}) |lambda_{root|v_k}|)^(1/k), k = 1..N,
// whose tail-window minimum estimates the path's lower compression radius.
struct PathRadius {
  std::vector<VertexId> path;
  std::vector<double> samples;  // a_1..a_N
  double r2 = 0.0;              // min over the tail window
  double tail_max = 0.0;
  double r2_at_half = 0.0;
  double half_gap_rel = 0.0;
  double bpe_radius = 0.0;  // 1 / max over window of beta_{v_k}^(-1/2k)
};
PathRadius path_r2(const ShiftOperator& S, std::span<const VertexId> path);

double path_bpe_radius(const ShiftOperator& S, std::span<const VertexId> path);

// Maximum of the path radius over the tree: enumerated paths (up to
// path_budget of them) plus a sweep over every frontier vertex, each of
// which determines the stored initial segment of some path. On trees whose
// per-depth samples are constant along all paths both routes agree exactly.
struct R2PlusEstimate {
  std::vector<PathRadius> paths;   // enumerated sample paths
  bool enumeration_complete = true;
  double path_max = 0.0;           // max r2 over enumerated paths
  double frontier_proxy = 0.0;     // max over frontier tail-window minima
  double estimate = 0.0;           // max of the two
};
R2PlusEstimate r2_plus(const ShiftOperator& S, std::size_t path_budget = 64,
                       const ExecPolicy& exec = {});

// Assembled summary of everything above, plus the spectral inclusions the
// computed radii support. Statuses distinguish what the truncation itself
// verified ("computed") from set inclusions quoted from theory ("theory");
// point-spectrum membership is never asserted numerically.
struct InclusionClaim {
  std::string kind;
  double radius = 0.0;
  std::string status;
};
struct SpectralReport {
  double norm = 0.0;
  std::vector<double> gelfand_seq;
  double spectral_radius_estimate = 0.0;
  BpeProfile bpe;
  R2PlusEstimate r2;
  std::vector<InclusionClaim> inclusions;
  bool normalized = false;
  int branching_depth_max = -1;  // deepest vertex with >= 2 children
  VertexId norm_argmax = kNoVertex;
  int norm_stabilized_depth = 0;
};
struct ReportOptions {
  int gelfand_kmax = 6;
  std::size_t path_budget = 16;
  ExecPolicy exec = {};
};
SpectralReport spectral_report(const ShiftOperator& S, const ReportOptions& opt = {});

}  // namespace treeshift

#endif
