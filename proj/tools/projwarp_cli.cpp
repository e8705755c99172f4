#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "projwarp/bench.hpp"
#include "projwarp/engine.hpp"
#include "projwarp/errors.hpp"
#include "projwarp/image_io.hpp"

namespace {

using namespace projwarp;

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::pair<int, int> parse_size(const std::string& text) {
    auto x = text.find('x');
    if (x == std::string::npos) x = text.find('X');
    if (x == std::string::npos) throw usage_error("size must be WxH: " + text);
    try {
        std::size_t u1 = 0, u2 = 0;
        int w = std::stoi(text.substr(0, x), &u1);
        int h = std::stoi(text.substr(x + 1), &u2);
        if (u1 != x || u2 != text.size() - x - 1 || w <= 0 || h <= 0) {
            throw usage_error("size must be positive WxH: " + text);
        }
        return {w, h};
    } catch (const std::logic_error&) {
        throw usage_error("size must be WxH: " + text);
    }
}

int run_warp(const std::string& in_path, const std::string& matrix_path,
             const std::string& sampler_tok, const std::string& kernel_tok,
             const std::string& out_path, const std::string& out_size, int threads,
             int lut_bins) {
    ImageBuffer src = load_image(in_path);
    Homography h = parse_matrix(read_text_file(matrix_path));

    WarpRequest req;
    req.homography = h;
    req.sampler = parse_sampler_token(sampler_tok);
    req.sampler.kernel = parse_kernel_token(kernel_tok);
    req.sampler.lut_bins = lut_bins;
    req.threads = threads;
    if (out_size.empty()) {
        req.out_width = src.width();
        req.out_height = src.height();
    } else {
        std::tie(req.out_width, req.out_height) = parse_size(out_size);
    }
    req.source = std::move(src);

    WarpResult res = warp(req);
    save_image(res.image, out_path);
    return 0;
}

int run_bench(const std::string& corpus, const std::string& seeds_tok,
              const std::string& methods_tok, int reps, const std::string& format,
              const std::string& out_path, int crop, int threads) {
    BenchConfig cfg;
    cfg.corpus_dir = corpus;
    cfg.seeds = parse_seeds(seeds_tok);
    cfg.methods = parse_methods(methods_tok);
    cfg.repetitions = reps;
    cfg.format = format;
    cfg.crop = crop;
    cfg.threads = threads;

    BenchReport report = run_benchmark(cfg);
    std::string text = emit_report(report, format);
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw data_error("cannot write report file: " + out_path);
        out << text;
    }
    return 0;
}

int run_pyramid(const std::string& in_path, const std::string& type,
                const std::string& dump_dir) {
    ImageBuffer src = load_image(in_path);
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dump_dir, ec);
    if (ec) throw data_error("cannot create dump directory: " + dump_dir);

    char name[64];
    if (type == "mip") {
        MipPyramid p = build_mipmap(src);
        for (std::size_t k = 0; k < p.levels.size(); ++k) {
            std::snprintf(name, sizeof(name), "mip_%02zu.pgm", k);
            save_image(p.levels[k], (fs::path(dump_dir) / name).string());
        }
    } else if (type == "rip") {
        RipMap r = build_ripmap(src);
        for (int ky = 0; ky < r.levels_y; ++ky) {
            for (int kx = 0; kx < r.levels_x; ++kx) {
                std::snprintf(name, sizeof(name), "rip_%02d_%02d.pgm", kx, ky);
                save_image(r.entry(kx, ky), (fs::path(dump_dir) / name).string());
            }
        }
    } else {
        throw usage_error("pyramid type must be mip or rip");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"projective image warping with selectable interpolation and anti-aliasing"};
    app.require_subcommand(1);

    std::string in_path, matrix_path, out_path, out_size;
    std::string sampler_tok = "point", kernel_tok = "bilinear";
    int threads = 1, lut_bins = 0;
    auto* warp_cmd = app.add_subcommand("warp", "warp one image by a homography");
    warp_cmd->add_option("--in", in_path, "input image (PGM/PNG)")->required();
    warp_cmd->add_option("--matrix", matrix_path, "3x3 matrix file, 9 reals row-major")
        ->required();
    warp_cmd->add_option("--sampler", sampler_tok, "point | super:<n> | mip | rip | fast:<n>[:seed]");
    warp_cmd->add_option("--kernel", kernel_tok,
                         "nearest | bilinear | bicubic[:alpha] | bspline | hermite");
    warp_cmd->add_option("--out", out_path, "output image path")->required();
    warp_cmd->add_option("--out-size", out_size, "output extent WxH (default: input size)");
    warp_cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
    warp_cmd->add_option("--lut-bins", lut_bins, "kernel LUT bins per unit (0 = exact)");

    std::string corpus, seeds_tok = "5", methods_tok = "all", format = "csv", report_path;
    int reps = 3, crop = 0;
    int bench_threads = 1;
    auto* bench_cmd = app.add_subcommand("bench", "composed-triple benchmark over a corpus");
    bench_cmd->add_option("--corpus", corpus, "directory of PGM/PNG images")->required();
    bench_cmd->add_option("--seeds", seeds_tok, "seed count or comma list");
    bench_cmd->add_option("--methods", methods_tok, "all or <sampler>+<kernel> list");
    bench_cmd->add_option("--reps", reps, "repetitions per measurement");
    bench_cmd->add_option("--format", format, "csv | json");
    bench_cmd->add_option("--out", report_path, "report file (default stdout)");
    bench_cmd->add_option("--crop", crop, "center-crop corpus images to NxN (0 = full)");
    bench_cmd->add_option("--threads", bench_threads, "worker threads inside each warp");

    std::string pyr_in, pyr_type, dump_dir;
    auto* pyr_cmd = app.add_subcommand("pyramid", "build and dump a pyramid");
    pyr_cmd->add_option("--in", pyr_in, "input image (PGM/PNG)")->required();
    pyr_cmd->add_option("--type", pyr_type, "mip | rip")->required();
    pyr_cmd->add_option("--dump", dump_dir, "directory for level images")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        if (warp_cmd->parsed()) {
            return run_warp(in_path, matrix_path, sampler_tok, kernel_tok, out_path,
                            out_size, threads, lut_bins);
        }
        if (bench_cmd->parsed()) {
            return run_bench(corpus, seeds_tok, methods_tok, reps, format, report_path,
                             crop, bench_threads);
        }
        if (pyr_cmd->parsed()) {
            return run_pyramid(pyr_in, pyr_type, dump_dir);
        }
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const data_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
