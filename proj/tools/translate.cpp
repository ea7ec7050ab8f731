#include <CLI11.hpp>

#include "folds/translate/translate.hpp"

using namespace folds;

int main(int argc, char** argv) {
    CLI::App app{"Translate every frame of a dataset through a trained generator"};
    std::string ckpt_path, in_path, out_dir, name = "sim-aug";
    app.add_option("--ckpt", ckpt_path, "translator checkpoint")->required();
    app.add_option("--in", in_path, "input dataset manifest")->required();
    app.add_option("--out", out_dir, "output dataset directory")->required();
    app.add_option("--name", name, "output split name");
    CLI11_PARSE(app, argc, argv);

    try {
        nn::Checkpoint ckpt = nn::Checkpoint::load(ckpt_path);
        data::DatasetManifest input = data::load_manifest(in_path);
        data::DatasetManifest out =
            translate::translate_dataset(ckpt, input, out_dir, name);
        std::printf("translated %zu frames to %s\n", out.frames.size(), out_dir.c_str());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
