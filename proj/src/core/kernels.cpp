#include "folds/core/kernels.hpp"

#include <cstring>

namespace folds::kernels {
namespace {

const Ops* g_active = nullptr;

const Ops* pick_best() {
    if (const Ops* v = avx2_ops()) return v;
    return &scalar_ops();
}

}  // namespace

const Ops& active() {
    if (!g_active) g_active = pick_best();
    return *g_active;
}

bool select(const char* name) {
    if (std::strcmp(name, "auto") == 0) {
        g_active = pick_best();
        return true;
    }
    if (std::strcmp(name, "scalar") == 0) {
        g_active = &scalar_ops();
        return true;
    }
    if (std::strcmp(name, "avx2") == 0) {
        if (const Ops* v = avx2_ops()) {
            g_active = v;
            return true;
        }
        return false;
    }
    return false;
}

}  // namespace folds::kernels
