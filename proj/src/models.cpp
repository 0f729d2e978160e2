#include "guard/models.hpp"

#include <algorithm>

namespace guard {

std::string_view to_string(ModelRole r) {
    return r == ModelRole::Primary ? "primary" : "shadow";
}

std::string_view to_string(ModelMode m) {
    return m == ModelMode::Active ? "active" : "passive";
}

namespace {

int wrong_label(int truth, int label_space, Rng& rng) {
    if (label_space < 2) return truth;
    const auto shift = 1 + rng.below(static_cast<std::uint64_t>(label_space - 1));
    return static_cast<int>((static_cast<std::uint64_t>(truth) + shift) %
                            static_cast<std::uint64_t>(label_space));
}

}  // namespace

Decision infer(const ModelSpec& model, int model_index, const WorkItem& item,
               const ModelAttackEffects& fx, int label_space, int meaning_count, Tick tick,
               Rng& rng) {
    Decision d;
    d.tick = tick;
    d.model = model_index;
    d.truth_label = item.truth_label;

    const double effective_p = std::clamp(model.accuracy * fx.accuracy_scale, 0.0, 1.0);

    // Draw order is fixed: correctness, wrong-label, meaning flatten,
    // confidence jitter. Branches that skip a draw are fine; what matters is
    // that each model consumes only its own substream.
    const bool correct = rng.uniform01() < effective_p;
    d.emitted_label = correct ? item.truth_label : wrong_label(item.truth_label, label_space, rng);

    if (fx.trojan_active && item.truth_label == fx.trojan_trigger_label)
        d.emitted_label = fx.trojan_emit_label;
    if (fx.glitch_flip) d.emitted_label = wrong_label(item.truth_label, label_space, rng);

    d.meaning_class = model.meaning_of(d.emitted_label);
    if (fx.meaning_flatten > 0.0 && rng.uniform01() < std::min(fx.meaning_flatten, 1.0))
        d.meaning_class = static_cast<int>(rng.below(static_cast<std::uint64_t>(meaning_count)));

    const double jitter =
        model.confidence_jitter > 0.0 ? rng.normal(0.0, model.confidence_jitter) : 0.0;
    d.confidence = std::clamp(effective_p + jitter, 0.0, 1.0);
    return d;
}

}  // namespace guard
