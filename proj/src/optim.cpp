#include "f2a/optim.hpp"

#include <cmath>

#include "f2a/errors.hpp"

namespace f2a {

void AdamState::init_like(const std::vector<Tensor*>& params) {
    m.clear();
    v.clear();
    for (const Tensor* p : params) {
        m.push_back(Tensor::zeros_like(*p));
        v.push_back(Tensor::zeros_like(*p));
    }
    t = 0;
}

void adam_step(const std::vector<Tensor*>& params,
               const std::vector<Tensor*>& grads, AdamState& st,
               const AdamConfig& cfg) {
    if (params.size() != grads.size() || params.size() != st.m.size())
        throw NumericError("adam_step: parameter/gradient/state count mismatch");
    st.t += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(st.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(st.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& p = *params[i];
        const Tensor& g = *grads[i];
        Tensor& mi = st.m[i];
        Tensor& vi = st.v[i];
        if (!p.same_shape(g) || !p.same_shape(mi))
            throw NumericError("adam_step: tensor shape mismatch at slot " +
                               std::to_string(i));
        for (std::size_t j = 0; j < p.v.size(); ++j) {
            const double gj = g.v[j];
            const double mj = cfg.beta1 * mi.v[j] + (1.0 - cfg.beta1) * gj;
            const double vj = cfg.beta2 * vi.v[j] + (1.0 - cfg.beta2) * gj * gj;
            mi.v[j] = static_cast<float>(mj);
            vi.v[j] = static_cast<float>(vj);
            p.v[j] = static_cast<float>(
                p.v[j] - cfg.lr * (mj / bc1) / (std::sqrt(vj / bc2) + cfg.eps));
        }
    }
}

} // namespace f2a
