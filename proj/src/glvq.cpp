#include "hdspk/glvq.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hdspk/rng.hpp"

namespace hdspk {

void GlvqConfig::validate() const {
    if (epochs < 0) throw std::invalid_argument("GlvqConfig: epochs must be >= 0");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
        throw std::invalid_argument("GlvqConfig: learning rate must be finite and > 0");
    if (!(lr_decay > 0.0) || !std::isfinite(lr_decay))
        throw std::invalid_argument("GlvqConfig: lr decay must be finite and > 0");
}

PrototypeSet init_prototypes(const std::vector<std::string>& labels,
                             const Eigen::MatrixXd& profile_rows) {
    if (labels.size() < 2) throw std::invalid_argument("init_prototypes: need >= 2 speakers");
    if (static_cast<Eigen::Index>(labels.size()) != profile_rows.rows())
        throw std::invalid_argument("init_prototypes: label/profile count mismatch");
    PrototypeSet protos;
    protos.labels = labels;
    protos.prototypes = profile_rows;
    for (Eigen::Index r = 0; r < protos.prototypes.rows(); ++r) {
        const double norm = protos.prototypes.row(r).norm();
        if (norm == 0.0)
            throw std::invalid_argument("init_prototypes: zero-norm profile for speaker " +
                                        labels[static_cast<std::size_t>(r)]);
        protos.prototypes.row(r) /= norm;
    }
    return protos;
}

PrototypeSet init_prototypes(const std::vector<SpeakerProfile>& profiles) {
    if (profiles.size() < 2) throw std::invalid_argument("init_prototypes: need >= 2 speakers");
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(profiles.size()), profiles.front().vec.size());
    std::vector<std::string> labels;
    labels.reserve(profiles.size());
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        rows.row(static_cast<Eigen::Index>(i)) = profiles[i].vec.transpose();
        labels.push_back(profiles[i].speaker_id);
    }
    return init_prototypes(labels, rows);
}

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Index of the closest prototype not belonging to `label_index`; ties resolve
// to the lowest index. Distances are squared Euclidean.
int nearest_other(const PrototypeSet& protos, const Eigen::Ref<const RealVec>& x,
                  int label_index) {
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int r = 0; r < protos.size(); ++r) {
        if (r == label_index) continue;
        const double dist = (protos.prototypes.row(r).transpose() - x).squaredNorm();
        if (dist < best_dist) {
            best_dist = dist;
            best = r;
        }
    }
    return best;
}

}  // namespace

double glvq_mu(const RealVec& x, const RealVec& w_correct, const RealVec& w_nearest_other) {
    const double d_j = (x - w_correct).squaredNorm();
    const double d_k = (x - w_nearest_other).squaredNorm();
    const double denom = d_j + d_k;
    if (denom == 0.0) return 0.0;  // x coincides with both prototypes
    return (d_j - d_k) / denom;
}

GlvqUpdate glvq_update(const RealVec& x, const RealVec& w_correct,
                       const RealVec& w_nearest_other, double learning_rate) {
    GlvqUpdate update;
    const double d_j = (x - w_correct).squaredNorm();
    const double d_k = (x - w_nearest_other).squaredNorm();
    const double denom = d_j + d_k;
    if (denom == 0.0) {
        update.delta_correct = RealVec::Zero(x.size());
        update.delta_nearest_other = RealVec::Zero(x.size());
        return update;
    }
    update.mu = (d_j - d_k) / denom;
    const double sigma = logistic(update.mu);
    const double gain = sigma * (1.0 - sigma);
    const double factor_j = 4.0 * d_k / (denom * denom);
    const double factor_k = 4.0 * d_j / (denom * denom);
    update.delta_correct = learning_rate * gain * factor_j * (x - w_correct);
    update.delta_nearest_other = -learning_rate * gain * factor_k * (x - w_nearest_other);
    return update;
}

StepOutcome glvq_step(PrototypeSet& protos, const Eigen::Ref<const RealVec>& x, int label_index,
                      double learning_rate, UpdateGate gate) {
    if (label_index < 0 || label_index >= protos.size())
        throw std::out_of_range("glvq_step: label index out of range");
    if (protos.size() < 2) throw std::invalid_argument("glvq_step: need >= 2 prototypes");

    const int other = nearest_other(protos, x, label_index);
    const RealVec w_j = protos.prototypes.row(label_index).transpose();
    const RealVec w_k = protos.prototypes.row(other).transpose();

    StepOutcome outcome;
    outcome.mu = glvq_mu(x, w_j, w_k);
    const bool misclassified = outcome.mu >= 0.0;
    if (gate == UpdateGate::kMisclassifiedOnly && !misclassified) return outcome;

    const GlvqUpdate update = glvq_update(x, w_j, w_k, learning_rate);
    RealVec new_j = w_j + update.delta_correct;
    RealVec new_k = w_k + update.delta_nearest_other;
    const double norm_j = new_j.norm();
    const double norm_k = new_k.norm();
    if (norm_j > 0.0) protos.prototypes.row(label_index) = (new_j / norm_j).transpose();
    if (norm_k > 0.0) protos.prototypes.row(other) = (new_k / norm_k).transpose();
    outcome.updated = true;
    return outcome;
}

int count_misclassified(const PrototypeSet& protos, const Eigen::MatrixXd& samples,
                        const std::vector<int>& labels) {
    int misclassified = 0;
    for (Eigen::Index r = 0; r < samples.rows(); ++r) {
        const RealVec x = samples.row(r).transpose();
        const int label = labels[static_cast<std::size_t>(r)];
        const int other = nearest_other(protos, x, label);
        const double mu = glvq_mu(x, protos.prototypes.row(label).transpose(),
                                  protos.prototypes.row(other).transpose());
        if (mu >= 0.0) ++misclassified;
    }
    return misclassified;
}

std::vector<EpochStats> glvq_train(PrototypeSet& protos, const Eigen::MatrixXd& samples,
                                   const std::vector<int>& labels, const GlvqConfig& cfg,
                                   const GlvqEvalHook& hook) {
    cfg.validate();
    if (samples.rows() != static_cast<Eigen::Index>(labels.size()))
        throw std::invalid_argument("glvq_train: sample/label count mismatch");
    if (samples.rows() > 0 && samples.cols() != protos.prototypes.cols())
        throw std::invalid_argument("glvq_train: sample dimension does not match prototypes");
    for (int label : labels)
        if (label < 0 || label >= protos.size())
            throw std::invalid_argument("glvq_train: label index out of range");

    std::vector<EpochStats> stats;
    stats.reserve(static_cast<std::size_t>(cfg.epochs) + 1);

    auto record = [&](int epoch) {
        EpochStats row;
        row.epoch = epoch;
        row.train_misclassified = count_misclassified(protos, samples, labels);
        if (hook) {
            const auto topk = hook(protos, epoch);
            row.test_top1 = topk[0];
            row.test_top5 = topk[1];
            row.test_top10 = topk[2];
        }
        stats.push_back(row);
    };

    record(0);  // centroid-equivalent starting point

    std::vector<int> order(static_cast<std::size_t>(samples.rows()));
    std::iota(order.begin(), order.end(), 0);
    double lr = cfg.learning_rate;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        // Per-epoch shuffle stream derived from (shuffle_seed, epoch).
        Xoshiro256ss rng(cfg.shuffle_seed ^
                         (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(epoch)));
        for (std::size_t i = order.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
            std::swap(order[i - 1], order[j]);
        }
        for (int idx : order)
            glvq_step(protos, samples.row(idx).transpose(), labels[static_cast<std::size_t>(idx)],
                      lr, cfg.gate);
        record(epoch);
        lr *= cfg.lr_decay;
    }
    return stats;
}

}  // namespace hdspk
