#include "folds/eval/overlay.hpp"

#include <map>
#include <stdexcept>

namespace folds::eval {

std::array<uint8_t, 3> palette_color(int gt_id) {
    static const std::array<uint8_t, 3> kPalette[] = {
        {230, 25, 75},  {60, 180, 75},   {255, 225, 25}, {0, 130, 200},
        {245, 130, 48}, {145, 30, 180},  {70, 240, 240}, {240, 50, 230},
        {210, 245, 60}, {250, 190, 212}, {0, 128, 128},  {220, 190, 255},
    };
    constexpr int n = static_cast<int>(std::size(kPalette));
    return kPalette[((gt_id - 1) % n + n) % n];
}

ImageU8 render_overlay(const ImageU8& image, const ImageU16& pred,
                       const MatchResult& match, float alpha) {
    if (image.width != pred.width || image.height != pred.height)
        throw std::invalid_argument("overlay image and instance mask shapes differ");

    std::map<int, std::array<uint8_t, 3>> color;
    for (const InstanceMatch& m : match.matches) color[m.pred_id] = palette_color(m.gt_id);
    for (int id : match.unmatched_pred) color[id] = {255, 255, 255};

    ImageU8 out(image.width, image.height, 3);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            uint8_t rgb[3];
            if (image.channels >= 3)
                for (int c = 0; c < 3; ++c) rgb[c] = image.at(x, y, c);
            else
                rgb[0] = rgb[1] = rgb[2] = image.at(x, y);
            const int id = pred.at(x, y);
            auto it = id ? color.find(id) : color.end();
            for (int c = 0; c < 3; ++c) {
                float v = rgb[c];
                if (it != color.end())
                    v = (1.0f - alpha) * v + alpha * static_cast<float>(it->second[c]);
                out.at(x, y, c) = static_cast<uint8_t>(v + 0.5f);
            }
        }
    }
    return out;
}

}  // namespace folds::eval
