#include "hsu/params.hpp"

#include <cmath>

#include "hsu/errors.hpp"

namespace hsu::nn {

HsuParameters HsuParameters::init(std::size_t hidden, std::size_t input_dim,
                                  std::size_t max_degree, std::mt19937& rng, double bound) {
    HsuParameters p;
    p.hidden = hidden;
    p.input_dim = input_dim;
    p.max_degree = max_degree;

    p.embed = Matrix(hidden, input_dim);
    p.embed.fill_uniform(bound, rng);
    p.esu_leaf = make_esu_weights(hidden, hidden, rng, bound);
    p.esu_agg = make_esu_weights(hidden, max_degree * hidden, rng, bound);
    p.isu = make_isu_weights(hidden, rng, bound);

    // The leaf unit's sibling-input columns start at zero: node content drives
    // the sequential states first, and the sibling pathway only grows where
    // content alone cannot fit (duplicated lines).
    for (Matrix* m : {&p.esu_leaf.forget, &p.esu_leaf.evolve, &p.esu_leaf.update,
                      &p.esu_leaf.select_z, &p.esu_leaf.select_r})
        for (std::size_t r = 0; r < m->rows; ++r)
            for (std::size_t c = 0; c < hidden; ++c) m->at(r, c) = 0.0;

    auto head = [&] {
        HeadWeights h{Matrix(input_dim, hidden), Matrix(input_dim, 1)};
        h.weight.fill_uniform(bound, rng);
        h.bias.fill_uniform(bound, rng);
        return h;
    };
    p.down = head();
    p.up = head();
    p.left = head();
    p.right = head();
    return p;
}

void sgd_step(HsuParameters& params, const Gradients& grads, double lr) {
    params.for_each_matrix([&](const char* name, const Matrix& m) {
        const Matrix* g = grads.find(m);
        if (!g) return;
        for (double v : g->data)
            if (!std::isfinite(v)) throw NonFiniteGradient(name);
    });
    params.for_each_matrix([&](const char*, Matrix& m) {
        const Matrix* g = grads.find(m);
        if (!g) return;
        for (std::size_t i = 0; i < m.size(); ++i) m.data[i] -= lr * g->data[i];
    });
}

}  // namespace hsu::nn
