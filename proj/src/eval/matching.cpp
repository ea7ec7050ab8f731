#include "folds/eval/matching.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace folds::eval {

MatchResult match_instances(const ImageU16& pred, const ImageU16& gt, double tau) {
    if (pred.width != gt.width || pred.height != gt.height)
        throw std::invalid_argument("instance mask shapes differ");

    std::map<int, int64_t> pred_area, gt_area;
    std::map<std::pair<int, int>, int64_t> inter;
    for (size_t i = 0; i < pred.size(); ++i) {
        const int p = pred.pixels[i], g = gt.pixels[i];
        if (p) ++pred_area[p];
        if (g) ++gt_area[g];
        if (p && g) ++inter[{p, g}];
    }

    struct Cand {
        double iou;
        int gt_id;
        int pred_id;
    };
    std::vector<Cand> cands;
    for (const auto& [key, in] : inter) {
        const auto [p, g] = key;
        const double iou =
            static_cast<double>(in) / static_cast<double>(pred_area[p] + gt_area[g] - in);
        if (iou >= tau) cands.push_back({iou, g, p});
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.iou != b.iou) return a.iou > b.iou;
        if (a.gt_id != b.gt_id) return a.gt_id < b.gt_id;
        return a.pred_id < b.pred_id;
    });

    MatchResult res;
    std::set<int> used_pred, used_gt;
    for (const Cand& c : cands) {
        if (used_pred.count(c.pred_id) || used_gt.count(c.gt_id)) continue;
        used_pred.insert(c.pred_id);
        used_gt.insert(c.gt_id);
        res.matches.push_back({c.pred_id, c.gt_id, c.iou});
    }
    for (const auto& [id, _] : pred_area)
        if (!used_pred.count(id)) res.unmatched_pred.push_back(id);
    for (const auto& [id, _] : gt_area)
        if (!used_gt.count(id)) res.unmatched_gt.push_back(id);
    return res;
}

}  // namespace folds::eval
