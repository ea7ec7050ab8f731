#pragma once

#include <string>
#include <vector>

#include "folds/core/image.hpp"

namespace folds::eval {

// |pred AND gt| / |pred OR gt|. Foreground is any nonzero pixel; inputs must
// be single channel with values in {0, 1, 255}. Both masks empty scores 1.0.
double binary_iou(const ImageU8& pred, const ImageU8& gt);

struct Aggregate {
    double mean = 0.0;  // percent
    double std = 0.0;   // percent, population
};

// Mean and population standard deviation of per-frame IoUs, in percent.
Aggregate aggregate(const std::vector<double>& per_frame);

struct RunMeta {
    std::string model;
    std::string train_set;
    std::string translation;  // "N.A." when untranslated
    std::string eval_set;
};

struct MetricReport {
    RunMeta meta;
    std::vector<double> per_frame;  // IoU in [0,1]; may be empty for recorded rows
    double mean = 0.0;              // percent
    double std = 0.0;               // percent

    static MetricReport from_frames(RunMeta meta, std::vector<double> per_frame);
};

void save_metric_report(const MetricReport& r, const std::string& path);
MetricReport load_metric_report(const std::string& path);

}  // namespace folds::eval
