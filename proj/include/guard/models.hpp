#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "guard/rng.hpp"
#include "guard/workload.hpp"

namespace guard {

enum class ModelRole : std::uint8_t { Primary, Shadow };
enum class ModelMode : std::uint8_t { Active, Passive };

std::string_view to_string(ModelRole r);
std::string_view to_string(ModelMode m);

/// A model is a stochastic label channel: correct with probability
/// `accuracy`, otherwise a uniformly random wrong label. Detection only
/// consumes agreement/accuracy statistics, so nothing heavier is modeled.
struct ModelSpec {
    std::string id;
    ModelRole role = ModelRole::Shadow;
    ModelMode mode = ModelMode::Passive;
    double accuracy = 1.0;          // p, absent attacks
    std::vector<int> meaning_map;   // label -> meaning class; empty = identity
    double confidence_jitter = 0.05;

    int meaning_of(int label) const {
        if (meaning_map.empty()) return label;
        return meaning_map[static_cast<std::size_t>(label)];
    }
};

/// What the active attacks do to one model on one tick.
struct ModelAttackEffects {
    double accuracy_scale = 1.0;   // multiplies p
    double meaning_flatten = 0.0;  // probability the meaning class is re-drawn uniformly
    bool glitch_flip = false;      // this tick's emitted label is forced wrong
    bool trojan_active = false;
    int trojan_trigger_label = -1;
    int trojan_emit_label = -1;
};

struct Decision {
    Tick tick = 0;
    int model = 0;  // index into the scenario's model roster
    int emitted_label = 0;
    int truth_label = 0;
    double confidence = 0.0;
    int meaning_class = 0;
};

/// One inference step. Label space size K comes from the workload profile;
/// meaning classes are re-drawn uniformly over `meaning_count` when an
/// active jailbreak/prompt-injection flattens the model's outputs.
Decision infer(const ModelSpec& model, int model_index, const WorkItem& item,
               const ModelAttackEffects& fx, int label_space, int meaning_count, Tick tick,
               Rng& rng);

}  // namespace guard
