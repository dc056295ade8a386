#include "credal_cert/mmd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "credal_cert/error.hpp"
#include "credal_cert/parallel.hpp"
#include "credal_cert/random.hpp"

namespace credal_cert {

std::string_view to_string(MmdKind kind) {
    return kind == MmdKind::Biased ? "biased" : "unbiased";
}

namespace {

void require_same_dim(const FeatureMatrix& a, const FeatureMatrix& b) {
    if (a.dim() != b.dim()) {
        throw InputError("dimension mismatch: source has " + std::to_string(a.dim()) +
                         " columns, target has " + std::to_string(b.dim()));
    }
}

// Sum over i != j of k(x_i, x_j), accumulated per row then in row order.
double offdiag_self_sum(const FeatureMatrix& x, const KernelSpec& spec) {
    const auto norms = detail::row_squared_norms(x);
    std::vector<double> partial(x.rows(), 0.0);
    parallel_for(0, x.rows(), [&](std::size_t i) {
        double acc = 0.0;
        const auto xi = x.row(i);
        for (std::size_t j = i + 1; j < x.rows(); ++j) {
            acc += detail::rbf_from_parts(spec.gamma(), norms[i], norms[j], dot(xi, x.row(j)));
        }
        partial[i] = acc;
    });
    return 2.0 * std::accumulate(partial.begin(), partial.end(), 0.0);
}

// Lexicographic order on (rows, entries); picks which argument drives the
// outer loop of the cross sum so that swapping arguments changes nothing.
bool canonically_before(const FeatureMatrix& a, const FeatureMatrix& b) {
    if (a.rows() != b.rows()) return a.rows() < b.rows();
    const auto& da = a.data();
    const auto& db = b.data();
    return std::lexicographical_compare(da.data(), da.data() + da.size(), db.data(),
                                        db.data() + db.size());
}

double cross_sum(const FeatureMatrix& a, const FeatureMatrix& b, const KernelSpec& spec) {
    const FeatureMatrix& outer = canonically_before(b, a) ? b : a;
    const FeatureMatrix& inner = (&outer == &a) ? b : a;
    const auto no = detail::row_squared_norms(outer);
    const auto ni = detail::row_squared_norms(inner);
    std::vector<double> partial(outer.rows(), 0.0);
    parallel_for(0, outer.rows(), [&](std::size_t i) {
        double acc = 0.0;
        const auto oi = outer.row(i);
        for (std::size_t j = 0; j < inner.rows(); ++j) {
            acc += detail::rbf_from_parts(spec.gamma(), no[i], ni[j], dot(oi, inner.row(j)));
        }
        partial[i] = acc;
    });
    return std::accumulate(partial.begin(), partial.end(), 0.0);
}

MmdEstimate assemble_unbiased(double self_s, double self_t, double cross, std::size_t m,
                              std::size_t n) {
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    const double term_s = self_s / (md * (md - 1.0));
    const double term_t = self_t / (nd * (nd - 1.0));
    const double term_st = 2.0 * cross / (md * nd);
    MmdEstimate est;
    est.mmd2 = (term_s + term_t) - term_st;
    est.mmd = std::sqrt(std::max(est.mmd2, 0.0));
    est.kind = MmdKind::Unbiased;
    est.m = m;
    est.n = n;
    return est;
}

void require_unbiased_sizes(std::size_t m, std::size_t n) {
    if (m < 2 || n < 2) {
        throw InputError("unbiased MMD needs at least two samples on each side (got m=" +
                         std::to_string(m) + ", n=" + std::to_string(n) + ")");
    }
}

}  // namespace

MmdEstimate mmd2_unbiased(const FeatureMatrix& source, const FeatureMatrix& target,
                          const KernelSpec& spec) {
    require_unbiased_sizes(source.rows(), target.rows());
    require_same_dim(source, target);
    return assemble_unbiased(offdiag_self_sum(source, spec), offdiag_self_sum(target, spec),
                             cross_sum(source, target, spec), source.rows(), target.rows());
}

MmdEstimate mmd2_biased(const FeatureMatrix& source, const FeatureMatrix& target,
                        const KernelSpec& spec) {
    require_same_dim(source, target);
    const double md = static_cast<double>(source.rows());
    const double nd = static_cast<double>(target.rows());
    // Diagonal entries are exactly 1: squared_distance(x, x) == 0.
    const double term_s = (offdiag_self_sum(source, spec) + md) / (md * md);
    const double term_t = (offdiag_self_sum(target, spec) + nd) / (nd * nd);
    const double term_st = 2.0 * cross_sum(source, target, spec) / (md * nd);
    MmdEstimate est;
    est.mmd2 = std::max((term_s + term_t) - term_st, 0.0);
    est.mmd = std::sqrt(est.mmd2);
    est.kind = MmdKind::Biased;
    est.m = source.rows();
    est.n = target.rows();
    return est;
}

double concentration_width(std::size_t m, std::size_t n, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InputError("alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
    if (m < 1 || n < 1) throw InputError("sample counts must be positive");
    return std::sqrt(2.0 * std::log(2.0 / alpha) / static_cast<double>(std::min(m, n)));
}

double mmd_upper_confidence(const MmdEstimate& est, double alpha) {
    if (est.kind != MmdKind::Unbiased) {
        throw InputError("upper confidence bound is only defined for the unbiased estimator");
    }
    return est.mmd + concentration_width(est.m, est.n, alpha);
}

SourceReference::SourceReference(FeatureMatrix source, KernelSpec spec)
    : source_(std::move(source)), spec_(spec), self_sum_(0.0) {
    if (source_.rows() < 2) {
        throw InputError("source sample needs at least two rows");
    }
    self_sum_ = offdiag_self_sum(source_, spec_);
}

MmdEstimate SourceReference::mmd2_unbiased(const FeatureMatrix& target) const {
    require_unbiased_sizes(source_.rows(), target.rows());
    require_same_dim(source_, target);
    return assemble_unbiased(self_sum_, offdiag_self_sum(target, spec_),
                             cross_sum(source_, target, spec_), source_.rows(), target.rows());
}

namespace {

// Unbiased statistic for the split (order[0..m), order[m..N)) of the pooled
// Gram matrix. The cross block is recovered from the pooled total.
double split_statistic(const Eigen::MatrixXd& gram, double pooled_offdiag,
                       const std::vector<std::size_t>& order, std::size_t m) {
    const std::size_t total = order.size();
    auto block_sum = [&](std::size_t lo, std::size_t hi) {
        double acc = 0.0;
        for (std::size_t a = lo; a < hi; ++a) {
            const auto ia = static_cast<Eigen::Index>(order[a]);
            for (std::size_t b = a + 1; b < hi; ++b) {
                acc += gram(ia, static_cast<Eigen::Index>(order[b]));
            }
        }
        return 2.0 * acc;
    };
    const double self_s = block_sum(0, m);
    const double self_t = block_sum(m, total);
    const double cross = 0.5 * (pooled_offdiag - self_s - self_t);
    return assemble_unbiased(self_s, self_t, cross, m, total - m).mmd2;
}

}  // namespace

CalibrationResult permutation_calibrate(const FeatureMatrix& source, const FeatureMatrix& target,
                                        const KernelSpec& spec, std::size_t num_permutations,
                                        double alpha, std::uint64_t seed) {
    require_unbiased_sizes(source.rows(), target.rows());
    require_same_dim(source, target);
    if (num_permutations < 100) {
        throw InputError("permutation calibration needs at least 100 permutations, got " +
                         std::to_string(num_permutations));
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InputError("alpha must lie in (0, 1), got " + std::to_string(alpha));
    }

    const FeatureMatrix pooled = FeatureMatrix::stack(source, target);
    const Eigen::MatrixXd gram = gram_matrix(pooled, pooled, spec);
    const std::size_t total = pooled.rows();
    const std::size_t m = source.rows();

    double pooled_offdiag = 0.0;
    for (Eigen::Index i = 0; i < gram.rows(); ++i) {
        double row = 0.0;
        for (Eigen::Index j = i + 1; j < gram.cols(); ++j) row += gram(i, j);
        pooled_offdiag += row;
    }
    pooled_offdiag *= 2.0;

    std::vector<std::size_t> identity(total);
    std::iota(identity.begin(), identity.end(), std::size_t{0});
    const double observed = split_statistic(gram, pooled_offdiag, identity, m);

    std::vector<double> permuted(num_permutations);
    parallel_for(0, num_permutations, [&](std::size_t p) {
        std::mt19937_64 rng(derive_seed(seed, p));
        std::vector<std::size_t> order = identity;
        std::shuffle(order.begin(), order.end(), rng);
        permuted[p] = split_statistic(gram, pooled_offdiag, order, m);
    });

    const auto at_least = static_cast<std::size_t>(
        std::count_if(permuted.begin(), permuted.end(), [&](double v) { return v >= observed; }));

    std::vector<double> sorted = permuted;
    std::sort(sorted.begin(), sorted.end());
    // 1-based order statistic ceil((1 - alpha) P); the small offset absorbs
    // representation error in products such as 0.95 * 500.
    const double rank = std::ceil((1.0 - alpha) * static_cast<double>(num_permutations) - 1e-9);
    const std::size_t idx =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::max(rank, 1.0)) - 1, 0,
                                num_permutations - 1);

    CalibrationResult result;
    result.epsilon_alpha = std::sqrt(std::max(sorted[idx], 0.0));
    result.p_value = (1.0 + static_cast<double>(at_least)) /
                     (static_cast<double>(num_permutations) + 1.0);
    result.observed_mmd2 = observed;
    result.num_permutations = num_permutations;
    result.alpha = alpha;
    result.seed = seed;
    return result;
}

}  // namespace credal_cert
