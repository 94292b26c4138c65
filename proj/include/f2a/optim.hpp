#pragma once

#include <cstdint>
#include <vector>

#include "f2a/tensor.hpp"

namespace f2a {

struct AdamConfig {
    double lr = 2e-5;
    double beta1 = 0.5;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// First/second moment estimates, one tensor per parameter in flat order.
struct AdamState {
    std::vector<Tensor> m, v;
    std::int64_t t = 0;

    void init_like(const std::vector<Tensor*>& params);
    bool empty() const { return m.empty(); }
};

// One update: advances st.t and applies bias-corrected moments to params.
void adam_step(const std::vector<Tensor*>& params,
               const std::vector<Tensor*>& grads, AdamState& st,
               const AdamConfig& cfg);

} // namespace f2a
