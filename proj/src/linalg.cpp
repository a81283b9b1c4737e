#include "proxgn/linalg.hpp"

#include <cmath>
#include <limits>

namespace proxgn {

namespace {

void require_finite(const Matrix& A, const char* what) {
  if (!A.allFinite()) {
    throw InvalidMatrix(std::string(what) + " has non-finite entries");
  }
}

}  // namespace

SvdFactors svd(const Matrix& A) {
  require_finite(A, "matrix");
  Eigen::JacobiSVD<Matrix> dec(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return SvdFactors{dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

double spectral_norm(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  require_finite(A, "matrix");
  return Eigen::JacobiSVD<Matrix>(A).singularValues()(0);
}

double default_rank_tolerance(const Matrix& A, double sigma_max) {
  const double dim = static_cast<double>(std::max(A.rows(), A.cols()));
  return std::numeric_limits<double>::epsilon() * dim * sigma_max;
}

Matrix pseudoinverse(const Matrix& A, double rank_tol) {
  const SvdFactors f = svd(A);
  const Eigen::Index k = f.singulars.size();
  const double sigma_max = k > 0 ? f.singulars(0) : 0.0;
  const double tol = rank_tol >= 0.0 ? rank_tol : default_rank_tolerance(A, sigma_max);

  Matrix pinv_sigma = Matrix::Zero(A.cols(), A.rows());
  for (Eigen::Index i = 0; i < k; ++i) {
    if (f.singulars(i) > tol) pinv_sigma(i, i) = 1.0 / f.singulars(i);
  }
  return f.right * pinv_sigma * f.left.transpose();
}

InjectivityReport injectivity(const Matrix& A, double threshold) {
  require_finite(A, "matrix");
  double smallest = 0.0;
  if (A.rows() >= A.cols() && A.cols() > 0) {
    const Vector s = Eigen::JacobiSVD<Matrix>(A).singularValues();
    smallest = s(s.size() - 1);
  }
  return InjectivityReport{smallest > threshold, smallest, threshold};
}

Matrix metric_operator(const Matrix& jac) {
  require_finite(jac, "jacobian");
  return jac.transpose() * jac;
}

PerturbationReport check_perturbation_lemma(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) {
    throw DimensionMismatch("perturbation check needs matrices of equal shape");
  }
  require_finite(A, "A");
  require_finite(B, "B");

  const SvdFactors fa = svd(A);
  const double sigma_max_a = fa.singulars.size() > 0 ? fa.singulars(0) : 0.0;
  const InjectivityReport inj =
      injectivity(A, default_rank_tolerance(A, sigma_max_a));
  if (!inj.injective) {
    throw HypothesisViolated("A must be injective");
  }

  const double norm_a_pinv = 1.0 / inj.smallest_singular;
  const double gap = spectral_norm(A - B);
  const double q = norm_a_pinv * gap;
  if (q >= 1.0) {
    throw HypothesisViolated("||A^+|| ||A-B|| = " + std::to_string(q) +
                             " is not < 1");
  }

  const Matrix a_pinv = pseudoinverse(A);
  const Matrix b_pinv = pseudoinverse(B);
  const double norm_b_pinv = spectral_norm(b_pinv);
  const double norm_diff = spectral_norm(b_pinv - a_pinv);

  const double norm_bound = norm_a_pinv / (1.0 - q);
  const double diff_bound = std::sqrt(2.0) * norm_a_pinv * norm_a_pinv * gap / (1.0 - q);

  PerturbationReport report;
  report.norm_slack = norm_bound - norm_b_pinv;
  report.diff_slack = diff_bound - norm_diff;
  report.norm_bound_ok = report.norm_slack >= -1e-10;
  report.diff_bound_ok = report.diff_slack >= -1e-10;
  return report;
}

}  // namespace proxgn
