#pragma once

#include <Eigen/Dense>

#include "proxgn/errors.hpp"

namespace proxgn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Full SVD A = U diag(s) V^T with U, V square orthogonal and s
/// sorted nonincreasing.
struct SvdFactors {
  Matrix left;      // m x m
  Vector singulars; // min(m, n), nonincreasing
  Matrix right;     // n x n
};

struct InjectivityReport {
  bool injective;
  double smallest_singular;
  double threshold;
};

/// Outcome of checking the pseudoinverse perturbation bounds
///   ||B^+||       <= ||A^+|| / (1 - ||A^+|| ||A-B||)
///   ||B^+ - A^+|| <= sqrt(2) ||A^+||^2 ||A-B|| / (1 - ||A^+|| ||A-B||)
/// for an injective A. Slack = bound - observed value.
struct PerturbationReport {
  bool norm_bound_ok;
  bool diff_bound_ok;
  double norm_slack;
  double diff_slack;
};

SvdFactors svd(const Matrix& A);

/// Largest singular value (the operator norm induced by Euclidean norms).
double spectral_norm(const Matrix& A);

/// eps * max(m, n) * sigma_max, the usual numerical-rank cutoff.
double default_rank_tolerance(const Matrix& A, double sigma_max);

/// Moore-Penrose inverse via SVD. Singular values <= rank_tol are
/// treated as zero; rank_tol < 0 selects the default cutoff.
Matrix pseudoinverse(const Matrix& A, double rank_tol = -1.0);

/// Smallest singular value of A viewed as an operator on its input
/// space (zero whenever rows < cols, since the kernel is nontrivial),
/// compared against the given threshold.
InjectivityReport injectivity(const Matrix& A, double threshold);

/// H = Jac^T Jac, the Gram operator defining the iteration metric.
Matrix metric_operator(const Matrix& jac);

/// Verifies both perturbation bounds for the pair (A, B).
/// Throws HypothesisViolated unless A is injective and
/// ||A^+|| ||A-B|| < 1.
PerturbationReport check_perturbation_lemma(const Matrix& A, const Matrix& B);

}  // namespace proxgn
