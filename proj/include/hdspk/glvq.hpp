#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "hdspk/encoder.hpp"
#include "hdspk/vsa.hpp"

namespace hdspk {

// One unit-norm prototype row per speaker, rows aligned with `labels`.
struct PrototypeSet {
    std::vector<std::string> labels;
    Eigen::MatrixXd prototypes;

    int size() const { return static_cast<int>(labels.size()); }
    int dim() const { return static_cast<int>(prototypes.cols()); }
};

enum class UpdateGate : std::uint8_t { kMisclassifiedOnly = 0, kAll = 1 };

struct GlvqConfig {
    int epochs = 30;
    double learning_rate = 0.05;
    double lr_decay = 1.0;  // multiplicative per-epoch factor
    std::uint64_t shuffle_seed = 0;
    UpdateGate gate = UpdateGate::kMisclassifiedOnly;

    void validate() const;
};

struct EpochStats {
    int epoch = 0;
    int train_misclassified = 0;
    // Test metrics are NaN when no evaluation hook is installed.
    double test_top1 = std::numeric_limits<double>::quiet_NaN();
    double test_top5 = std::numeric_limits<double>::quiet_NaN();
    double test_top10 = std::numeric_limits<double>::quiet_NaN();
};

// Prototype s = V_s normalized to unit length. Throws (naming the speaker) on
// a zero-norm profile.
PrototypeSet init_prototypes(const std::vector<SpeakerProfile>& profiles);
PrototypeSet init_prototypes(const std::vector<std::string>& labels,
                             const Eigen::MatrixXd& profile_rows);

// Relative distance mu = (d_J - d_K) / (d_J + d_K), squared Euclidean.
// mu < 0 iff the sample is correctly classified by the nearest-prototype rule.
double glvq_mu(const RealVec& x, const RealVec& w_correct, const RealVec& w_nearest_other);

// Pre-normalization prototype deltas for one sample: gradient descent on the
// logistic loss sigma(mu).
struct GlvqUpdate {
    RealVec delta_correct;
    RealVec delta_nearest_other;
    double mu = 0.0;
};
GlvqUpdate glvq_update(const RealVec& x, const RealVec& w_correct,
                       const RealVec& w_nearest_other, double learning_rate);

// Applies one sample: picks w_J (correct class) and w_K (nearest other
// class), updates both if the gate admits the sample, re-normalizes the two
// touched rows. Returns whether an update happened and the sample's mu.
struct StepOutcome {
    bool updated = false;
    double mu = 0.0;
};
StepOutcome glvq_step(PrototypeSet& protos, const Eigen::Ref<const RealVec>& x, int label_index,
                      double learning_rate, UpdateGate gate = UpdateGate::kMisclassifiedOnly);

// Count of samples the current prototypes misclassify (mu >= 0).
int count_misclassified(const PrototypeSet& protos, const Eigen::MatrixXd& samples,
                        const std::vector<int>& labels);

// Optional per-epoch test evaluation: returns {top1, top5, top10}.
using GlvqEvalHook = std::function<std::array<double, 3>(const PrototypeSet&, int epoch)>;

// Sequential SGD over per-epoch shuffles of the samples (rows of `samples`,
// unit norm). Stats row 0 reflects the initial prototypes; row e reflects the
// state after epoch e. Deterministic given cfg.shuffle_seed.
std::vector<EpochStats> glvq_train(PrototypeSet& protos, const Eigen::MatrixXd& samples,
                                   const std::vector<int>& labels, const GlvqConfig& cfg,
                                   const GlvqEvalHook& hook = nullptr);

}  // namespace hdspk
