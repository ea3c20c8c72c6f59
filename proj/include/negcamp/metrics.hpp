#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace negcamp {

struct Confusion {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    std::size_t total() const { return tp + fp + fn + tn; }
};

inline Confusion confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                           int positive_class = 1) {
    if (y_true.size() != y_pred.size()) throw std::invalid_argument("confusion: length mismatch");
    if (y_true.empty()) throw std::invalid_argument("confusion: empty input");
    Confusion c;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if ((y_true[i] != 0 && y_true[i] != 1) || (y_pred[i] != 0 && y_pred[i] != 1))
            throw std::invalid_argument("confusion: non-binary label at index " + std::to_string(i));
        bool t = y_true[i] == positive_class;
        bool p = y_pred[i] == positive_class;
        if (t && p) ++c.tp;
        else if (!t && p) ++c.fp;
        else if (t && !p) ++c.fn;
        else ++c.tn;
    }
    return c;
}

struct Prf1 {
    double precision = 0.0, recall = 0.0, f1 = 0.0;
};

// zero-denominator convention: P=0 when tp+fp=0, R=0 when tp+fn=0, F1=0 when both
inline Prf1 prf1(const Confusion& c) {
    Prf1 r;
    r.precision = (c.tp + c.fp) > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
    r.recall = (c.tp + c.fn) > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
    r.f1 = (2 * c.tp + c.fn + c.fp) > 0
               ? 2.0 * static_cast<double>(c.tp) / static_cast<double>(2 * c.tp + c.fn + c.fp)
               : 0.0;
    return r;
}

inline double f1_macro(const std::vector<double>& class_f1s) {
    if (class_f1s.empty()) throw std::invalid_argument("f1_macro: no classes");
    double s = 0.0;
    for (double f : class_f1s) s += f;
    return s / static_cast<double>(class_f1s.size());
}

inline double f1_weighted(const std::vector<double>& class_f1s, const std::vector<std::size_t>& supports) {
    if (class_f1s.size() != supports.size()) throw std::invalid_argument("f1_weighted: size mismatch");
    std::size_t total = 0;
    for (auto s : supports) total += s;
    if (total == 0) throw std::invalid_argument("f1_weighted: zero total support");
    double out = 0.0;
    for (std::size_t i = 0; i < class_f1s.size(); ++i)
        out += class_f1s[i] * static_cast<double>(supports[i]) / static_cast<double>(total);
    return out;
}

struct EvalReport {
    Prf1 class1;
    Prf1 class0;
    std::size_t support1 = 0, support0 = 0;
    double f1m = 0.0, f1w = 0.0;
    Confusion conf;  // positive class 1
    std::string provenance;
};

inline EvalReport evaluate(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                           std::string provenance = "") {
    EvalReport r;
    r.conf = confusion(y_true, y_pred, 1);
    r.class1 = prf1(r.conf);
    r.class0 = prf1(confusion(y_true, y_pred, 0));
    for (int y : y_true) (y == 1 ? r.support1 : r.support0)++;
    r.f1m = f1_macro({r.class0.f1, r.class1.f1});
    r.f1w = f1_weighted({r.class0.f1, r.class1.f1}, {r.support0, r.support1});
    r.provenance = std::move(provenance);
    return r;
}

}  // namespace negcamp
