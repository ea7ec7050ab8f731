#include "folds/segment/instances.hpp"

#include <algorithm>
#include <vector>

namespace folds::segment {

ImageU16 extract_instances(const ImageU8& binary, int min_area) {
    const int w = binary.width, h = binary.height;
    std::vector<int> label(static_cast<size_t>(w) * h, 0);
    struct Comp {
        int id;
        int area;
        int first_pixel;
    };
    std::vector<Comp> comps;

    std::vector<int> stack;
    int next = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int p = y * w + x;
            if (binary.at(x, y) == 0 || label[static_cast<size_t>(p)] != 0) continue;
            ++next;
            int area = 0;
            stack.assign(1, p);
            label[static_cast<size_t>(p)] = next;
            while (!stack.empty()) {
                const int q = stack.back();
                stack.pop_back();
                ++area;
                const int qx = q % w, qy = q / w;
                const int nbr[4] = {q - 1, q + 1, q - w, q + w};
                const bool ok[4] = {qx > 0, qx < w - 1, qy > 0, qy < h - 1};
                for (int k = 0; k < 4; ++k) {
                    if (!ok[k]) continue;
                    const int r = nbr[k];
                    if (binary.at(r % w, r / w) != 0 && label[static_cast<size_t>(r)] == 0) {
                        label[static_cast<size_t>(r)] = next;
                        stack.push_back(r);
                    }
                }
            }
            comps.push_back({next, area, p});
        }
    }

    std::stable_sort(comps.begin(), comps.end(), [](const Comp& a, const Comp& b) {
        if (a.area != b.area) return a.area > b.area;
        return a.first_pixel < b.first_pixel;
    });

    std::vector<uint16_t> remap(static_cast<size_t>(next) + 1, 0);
    uint16_t out_id = 0;
    for (const Comp& c : comps)
        if (c.area >= min_area) remap[static_cast<size_t>(c.id)] = ++out_id;

    ImageU16 out(w, h, 1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out.at(x, y) = remap[static_cast<size_t>(label[static_cast<size_t>(y * w + x)])];
    return out;
}

}  // namespace folds::segment
