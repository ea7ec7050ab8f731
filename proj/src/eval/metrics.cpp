#include "folds/eval/metrics.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace folds::eval {

double binary_iou(const ImageU8& pred, const ImageU8& gt) {
    if (pred.channels != 1 || gt.channels != 1)
        throw std::invalid_argument("binary_iou expects single-channel masks");
    if (pred.width != gt.width || pred.height != gt.height)
        throw std::invalid_argument("binary_iou mask shapes differ: " +
                                    std::to_string(pred.width) + "x" +
                                    std::to_string(pred.height) + " vs " +
                                    std::to_string(gt.width) + "x" + std::to_string(gt.height));
    int64_t inter = 0, uni = 0;
    for (size_t i = 0; i < pred.size(); ++i) {
        const uint8_t p = pred.pixels[i], g = gt.pixels[i];
        if ((p != 0 && p != 1 && p != 255) || (g != 0 && g != 1 && g != 255))
            throw std::invalid_argument("binary_iou input is not binary (pixel value " +
                                        std::to_string(p != 0 && p != 1 && p != 255 ? p : g) +
                                        ")");
        inter += (p && g) ? 1 : 0;
        uni += (p || g) ? 1 : 0;
    }
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

Aggregate aggregate(const std::vector<double>& per_frame) {
    if (per_frame.empty()) throw std::invalid_argument("aggregate of empty IoU list");
    double sum = 0.0;
    for (double v : per_frame) sum += v;
    const double mean = sum / static_cast<double>(per_frame.size());
    double var = 0.0;
    for (double v : per_frame) var += (v - mean) * (v - mean);
    var /= static_cast<double>(per_frame.size());
    return {mean * 100.0, std::sqrt(var) * 100.0};
}

MetricReport MetricReport::from_frames(RunMeta meta, std::vector<double> per_frame) {
    MetricReport r;
    r.meta = std::move(meta);
    const Aggregate a = aggregate(per_frame);
    r.per_frame = std::move(per_frame);
    r.mean = a.mean;
    r.std = a.std;
    return r;
}

void save_metric_report(const MetricReport& r, const std::string& path) {
    nlohmann::json j{{"model", r.meta.model},
                     {"train_set", r.meta.train_set},
                     {"translation", r.meta.translation},
                     {"eval_set", r.meta.eval_set},
                     {"per_frame", r.per_frame},
                     {"mean", r.mean},
                     {"std", r.std}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

MetricReport load_metric_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    nlohmann::json j;
    in >> j;
    MetricReport r;
    r.meta.model = j.at("model").get<std::string>();
    r.meta.train_set = j.at("train_set").get<std::string>();
    r.meta.translation = j.value("translation", "N.A.");
    r.meta.eval_set = j.at("eval_set").get<std::string>();
    r.per_frame = j.value("per_frame", std::vector<double>{});
    r.mean = j.at("mean").get<double>();
    r.std = j.at("std").get<double>();
    if (!r.per_frame.empty()) {
        const Aggregate a = aggregate(r.per_frame);
        if (std::abs(a.mean - r.mean) > 1e-9 || std::abs(a.std - r.std) > 1e-9)
            throw std::runtime_error("metric report " + path +
                                     " has mean/std inconsistent with per-frame values");
    }
    return r;
}

}  // namespace folds::eval
