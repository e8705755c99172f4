#include "projwarp/bench.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <vector>

#include <json.hpp>

#include "projwarp/errors.hpp"
#include "projwarp/image_io.hpp"

namespace projwarp {

double psnr(const ImageBuffer& test, const ImageBuffer& reference) {
    if (test.width() != reference.width() || test.height() != reference.height()) {
        throw data_error("PSNR requires equal image dimensions");
    }
    int max_ref = 0;
    double sse = 0.0;
    for (int y = 0; y < reference.height(); ++y) {
        for (int x = 0; x < reference.width(); ++x) {
            max_ref = std::max(max_ref, int(reference(x, y)));
            double d = double(test(x, y)) - double(reference(x, y));
            sse += d * d;
        }
    }
    if (max_ref == 0) throw numeric_error("PSNR reference image is all zero");
    if (sse == 0.0) return std::numeric_limits<double>::infinity();
    double kl = double(reference.pixel_count());
    return 10.0 * std::log10(kl * double(max_ref) * double(max_ref) / sse);
}

namespace {

int sampler_rank(const SamplerConfig& c) {
    switch (c.kind) {
        case SamplerKind::point: return 0;
        case SamplerKind::supersample: return 1;
        case SamplerKind::mip: return 2;
        case SamplerKind::rip: return 3;
        case SamplerKind::fast: return 4;
    }
    return 5;
}

int kernel_rank(KernelId k) {
    switch (k.kind) {
        case KernelKind::nearest: return 0;
        case KernelKind::bilinear: return 1;
        case KernelKind::bicubic: return 2;
        case KernelKind::bspline: return 3;
        case KernelKind::hermite: return 4;
    }
    return 5;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    if (n == 0) return 0.0;
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ImageBuffer center_crop(const ImageBuffer& img, int size) {
    int w = std::min(size, img.width());
    int h = std::min(size, img.height());
    int x0 = (img.width() - w) / 2;
    int y0 = (img.height() - h) / 2;
    ImageBuffer out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) out(x, y) = img(x0 + x, y0 + y);
    }
    return out;
}

std::vector<std::string> corpus_files(const std::string& dir) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return char(std::tolower(c)); });
        if (ext == ".pgm" || ext == ".png") files.push_back(entry.path().string());
    }
    if (ec) throw data_error("cannot read corpus directory: " + dir);
    if (files.empty()) throw data_error("corpus directory holds no .pgm/.png images: " + dir);
    std::sort(files.begin(), files.end());
    return files;
}

std::string format_double(double v, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

}  // namespace

std::vector<MethodSpec> parse_methods(const std::string& spec) {
    std::vector<MethodSpec> methods;
    if (spec == "all") {
        const char* samplers[] = {"point", "super:7", "mip", "rip", "fast:16"};
        const char* kernels[] = {"nearest", "bilinear", "bicubic", "bspline", "hermite"};
        for (const char* s : samplers) {
            for (const char* k : kernels) {
                MethodSpec m;
                m.sampler = parse_sampler_token(s);
                m.sampler.kernel = parse_kernel_token(k);
                methods.push_back(m);
            }
        }
        return methods;
    }
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        std::size_t comma = spec.find(',', pos);
        std::string pair = spec.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (pair.empty()) throw usage_error("empty method entry in: " + spec);
        std::size_t plus = pair.find('+');
        if (plus == std::string::npos) {
            throw usage_error("method must be <sampler>+<kernel>: " + pair);
        }
        MethodSpec m;
        m.sampler = parse_sampler_token(pair.substr(0, plus));
        m.sampler.kernel = parse_kernel_token(pair.substr(plus + 1));
        methods.push_back(m);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (methods.empty()) throw usage_error("method list is empty");
    return methods;
}

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
    std::vector<std::uint64_t> seeds;
    auto parse_one = [&](const std::string& text) {
        try {
            std::size_t used = 0;
            std::uint64_t v = std::stoull(text, &used);
            if (used != text.size()) throw usage_error("bad seed: " + text);
            return v;
        } catch (const std::logic_error&) {
            throw usage_error("bad seed value: " + text);
        }
    };
    if (spec.find(',') == std::string::npos) {
        std::uint64_t n = parse_one(spec);
        if (n == 0 || n > 100000) throw usage_error("seed count out of range: " + spec);
        for (std::uint64_t s = 1; s <= n; ++s) seeds.push_back(s);
        return seeds;
    }
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        std::size_t comma = spec.find(',', pos);
        std::string tok = spec.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (!tok.empty()) seeds.push_back(parse_one(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (seeds.empty()) throw usage_error("seed list is empty");
    return seeds;
}

BenchReport run_benchmark(const BenchConfig& cfg) {
    if (cfg.methods.empty()) throw usage_error("benchmark needs at least one method");
    if (cfg.seeds.empty()) throw usage_error("benchmark needs at least one seed");
    if (cfg.repetitions < 1) throw usage_error("repetitions must be at least 1");
    if (cfg.format != "csv" && cfg.format != "json") {
        throw usage_error("report format must be csv or json");
    }

    std::vector<ImageBuffer> corpus;
    for (const auto& file : corpus_files(cfg.corpus_dir)) {
        ImageBuffer img = load_image(file);
        if (cfg.crop > 0) img = center_crop(img, cfg.crop);
        corpus.push_back(std::move(img));
    }

    struct Accum {
        std::vector<double> times, pyramids, psnrs;
        TapStats stats;
        std::uint64_t runs = 0;
    };
    std::vector<Accum> acc(cfg.methods.size());

    for (const ImageBuffer& img : corpus) {
        for (std::uint64_t seed : cfg.seeds) {
            auto triple = random_composed_triple(seed, img.width(), img.height());
            for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
                const SamplerConfig& sampler = cfg.methods[mi].sampler;
                std::vector<double> rep_times, rep_pyramids;
                ChainResult last;
                for (int rep = 0; rep < cfg.repetitions; ++rep) {
                    auto t0 = std::chrono::steady_clock::now();
                    last = warp_chain(img, triple, sampler, cfg.threads);
                    double wall =
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                            .count();
                    rep_times.push_back(wall - last.stats.pyramid_build_seconds);
                    rep_pyramids.push_back(last.stats.pyramid_build_seconds);
                }
                Accum& a = acc[mi];
                a.times.push_back(median(rep_times));
                a.pyramids.push_back(median(rep_pyramids));
                a.psnrs.push_back(psnr(last.image, img));
                a.stats.merge(last.stats);
                a.runs += 1;
            }
        }
    }

    BenchReport report;
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
        const Accum& a = acc[mi];
        BenchRow row;
        row.sampler = sampler_token(cfg.methods[mi].sampler);
        row.kernel = kernel_token(cfg.methods[mi].sampler.kernel);
        double tsum = 0;
        for (double t : a.times) tsum += t;
        row.time_s = tsum / double(a.times.size());
        double psum = 0;
        for (double p : a.pyramids) psum += p;
        row.pyramid_build_s = psum / double(a.pyramids.size());
        double finite_sum = 0;
        std::size_t finite_count = 0;
        for (double p : a.psnrs) {
            if (std::isinf(p)) continue;
            finite_sum += p;
            ++finite_count;
        }
        if (finite_count == 0) {
            row.psnr_infinite = true;
        } else {
            row.psnr_db = finite_sum / double(finite_count);
        }
        row.taps_per_pixel =
            double(a.stats.interpolation_taps) / double(a.stats.pixels_processed);
        row.samples_per_pixel =
            double(a.stats.structure_samples) / double(a.stats.pixels_processed);
        report.rows.push_back(std::move(row));
    }

    // Table-style order: sampler-major, kernel-minor.
    std::vector<std::pair<std::pair<int, int>, std::size_t>> order;
    for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
        order.push_back({{sampler_rank(cfg.methods[i].sampler),
                          kernel_rank(cfg.methods[i].sampler.kernel)},
                         i});
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    BenchReport sorted;
    for (const auto& [rank, idx] : order) sorted.rows.push_back(report.rows[idx]);
    return sorted;
}

std::string emit_report(const BenchReport& r, const std::string& format) {
    if (format == "csv") {
        std::string out =
            "sampler,kernel,time_s,psnr_db,taps_per_pixel,samples_per_pixel,pyramid_build_s\n";
        for (const BenchRow& row : r.rows) {
            out += row.sampler + "," + row.kernel + ",";
            out += format_double(row.time_s, "%.6f") + ",";
            out += row.psnr_infinite ? "inf" : format_double(row.psnr_db, "%.6f");
            out += ",";
            out += format_double(row.taps_per_pixel, "%.3f") + ",";
            out += format_double(row.samples_per_pixel, "%.3f") + ",";
            out += format_double(row.pyramid_build_s, "%.6f") + "\n";
        }
        return out;
    }
    if (format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (const BenchRow& row : r.rows) {
            nlohmann::json j;
            j["sampler"] = row.sampler;
            j["kernel"] = row.kernel;
            j["time_s"] = row.time_s;
            if (row.psnr_infinite) {
                j["psnr_db"] = nullptr;
            } else {
                j["psnr_db"] = row.psnr_db;
            }
            j["taps_per_pixel"] = row.taps_per_pixel;
            j["samples_per_pixel"] = row.samples_per_pixel;
            j["pyramid_build_s"] = row.pyramid_build_s;
            rows.push_back(std::move(j));
        }
        return rows.dump(2) + "\n";
    }
    throw usage_error("report format must be csv or json");
}

}  // namespace projwarp
