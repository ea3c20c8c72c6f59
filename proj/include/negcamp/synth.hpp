#pragma once

#include <string>

#include "negcamp/rng.hpp"
#include "negcamp/types.hpp"

namespace negcamp {

// Synthetic geometry: three Gaussian components. "Clean" and "overlap"
// components carry label 0 (no negativity), the negative component label 1.
// The overlap mean is normally placed close to the negative mean so that part
// of class 0 sits on top of class 1 in embedding space.
struct SynthSpec {
    std::size_t dim = 2;
    std::size_t n_pos_clean = 100;
    std::size_t n_pos_overlap = 0;
    std::size_t n_neg = 100;
    Vector mean_clean;
    Vector mean_overlap;
    Vector mean_neg;
    double scale_clean = 1.0;
    double scale_overlap = 1.0;
    double scale_neg = 1.0;
};

inline Dataset synth_generate(const SynthSpec& spec, std::uint64_t seed) {
    if (spec.n_pos_clean == 0 && spec.n_pos_overlap == 0 && spec.n_neg == 0)
        throw std::invalid_argument("synth_generate: all counts zero");
    if (spec.scale_clean <= 0.0 || spec.scale_overlap <= 0.0 || spec.scale_neg <= 0.0)
        throw std::invalid_argument("synth_generate: non-positive scale");
    auto mean_or = [&](const Vector& m, double fill) {
        if (m.empty()) return Vector(spec.dim, fill);
        if (m.size() != spec.dim) throw std::invalid_argument("synth_generate: mean dimension mismatch");
        return m;
    };
    Vector mc = mean_or(spec.mean_clean, 0.0);
    Vector mo = mean_or(spec.mean_overlap, 4.0);
    Vector mn = mean_or(spec.mean_neg, 5.0);

    Rng rng(seed);
    Dataset ds;
    auto emit = [&](const Vector& mean, double scale, std::size_t count, int label, const char* tag) {
        for (std::size_t i = 0; i < count; ++i) {
            Document d;
            d.id = std::string(tag) + "_" + std::to_string(i);
            d.label = label;
            Vector e(spec.dim);
            for (std::size_t k = 0; k < spec.dim; ++k) e[k] = rng.normal(mean[k], scale);
            d.embedding = std::move(e);
            ds.add(std::move(d));
        }
    };
    emit(mc, spec.scale_clean, spec.n_pos_clean, 0, "clean");
    emit(mo, spec.scale_overlap, spec.n_pos_overlap, 0, "ovl");
    emit(mn, spec.scale_neg, spec.n_neg, 1, "neg");
    return ds;
}

// The fixed overlap benchmark used by the harness comparisons. Class 1 is
// rare (12%) and its blob is buried under a broad overlap component of class
// 0, so a single model's mixed regions vote class 0 while the second-stage
// model sees a balanced subproblem.
inline SynthSpec overlap_benchmark_spec(std::size_t n_total, double overlap_fraction,
                                        std::size_t dim = 6) {
    SynthSpec s;
    s.dim = dim;
    std::size_t n_neg = static_cast<std::size_t>(n_total * 0.12);
    std::size_t n_pos = n_total - n_neg;
    s.n_pos_overlap = static_cast<std::size_t>(n_pos * overlap_fraction);
    s.n_pos_clean = n_pos - s.n_pos_overlap;
    s.n_neg = n_neg;
    s.mean_clean = Vector(dim, 0.0);
    s.mean_neg = Vector(dim, 5.0);
    s.mean_overlap = Vector(dim, 5.3);
    s.scale_clean = 1.0;
    s.scale_overlap = 1.2;
    s.scale_neg = 1.0;
    return s;
}

}  // namespace negcamp
