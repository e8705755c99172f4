#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "projwarp/bench.hpp"
#include "projwarp/errors.hpp"
#include "projwarp/image_io.hpp"
#include "testutil.hpp"

#ifdef PROJWARP_TEST_PNG
#include <png.h>
#endif

using namespace projwarp;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("projwarp_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

TEST_CASE("psnr of identical images is infinite") {
    ImageBuffer a = testutil::document_image(32, 32, 1);
    CHECK(std::isinf(psnr(a, a)));
}

TEST_CASE("psnr of an off-by-one image matches the closed form") {
    ImageBuffer ref(16, 16, 200);
    ref(0, 0) = 255;  // max S = 255
    ImageBuffer test = ref;
    for (auto& p : test.pixels()) p = std::uint8_t(p - 1);
    // MSE = 1, so PSNR = 10*log10(255^2) = 48.1308...
    CHECK(psnr(test, ref) == doctest::Approx(10.0 * std::log10(255.0 * 255.0)).epsilon(1e-9));
}

TEST_CASE("psnr rejects mismatched dimensions and a zero reference") {
    ImageBuffer a(8, 8, 10);
    ImageBuffer b(8, 9, 10);
    CHECK_THROWS_AS(psnr(a, b), data_error);

    ImageBuffer zero(8, 8, 0);
    CHECK_THROWS_AS(psnr(a, zero), numeric_error);
}

TEST_CASE("pgm round trip is lossless") {
    TempDir tmp("pgm");
    ImageBuffer img = testutil::natural_image(37, 23, 5);
    std::string path = (tmp.path / "img.pgm").string();
    save_image(img, path);
    CHECK(load_image(path) == img);
}

TEST_CASE("pgm loader accepts comments and rejects bad headers") {
    TempDir tmp("pgmhdr");
    std::string path = (tmp.path / "c.pgm").string();
    {
        std::ofstream out(path, std::ios::binary);
        out << "P5\n# a comment\n2 2\n# another\n255\n";
        out.write("\x01\x02\x03\x04", 4);
    }
    ImageBuffer img = load_image(path);
    CHECK(img.width() == 2);
    CHECK(img(1, 1) == 4);

    std::string deep = (tmp.path / "deep.pgm").string();
    {
        std::ofstream out(deep, std::ios::binary);
        out << "P5\n2 2\n65535\n";
        out.write("\x01\x02\x03\x04\x01\x02\x03\x04", 8);
    }
    CHECK_THROWS_AS(load_image(deep), data_error);

    std::string trunc = (tmp.path / "t.pgm").string();
    {
        std::ofstream out(trunc, std::ios::binary);
        out << "P5\n4 4\n255\n";
        out.write("\x01\x02", 2);
    }
    CHECK_THROWS_AS(load_image(trunc), data_error);

    CHECK_THROWS_AS(load_image((tmp.path / "missing.pgm").string()), data_error);
}

TEST_CASE("luma conversion uses integer BT.601 weights") {
    CHECK(rgb_to_luma(255, 255, 255) == 255);
    CHECK(rgb_to_luma(0, 0, 0) == 0);
    CHECK(rgb_to_luma(255, 0, 0) == 76);   // 76.245 rounds down
    CHECK(rgb_to_luma(0, 255, 0) == 150);  // 149.685 rounds up
    CHECK(rgb_to_luma(0, 0, 255) == 29);   // 29.07 rounds down
    CHECK(rgb_to_luma(100, 100, 100) == 100);
}

#ifdef PROJWARP_TEST_PNG
TEST_CASE("png gray round trip is lossless") {
    REQUIRE(png_supported());
    TempDir tmp("png");
    ImageBuffer img = testutil::document_image(41, 29, 6);
    std::string path = (tmp.path / "img.png").string();
    save_image(img, path);
    CHECK(load_image(path) == img);
}

TEST_CASE("color png converts through BT.601 luma") {
    TempDir tmp("pngrgb");
    std::string path = (tmp.path / "rgb.png").string();

    // Write a tiny RGB png directly with libpng.
    const int w = 3, h = 1;
    std::uint8_t row[w * 3] = {255, 0, 0, 0, 255, 0, 10, 20, 30};
    FILE* fp = std::fopen(path.c_str(), "wb");
    REQUIRE(fp != nullptr);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    REQUIRE(setjmp(png_jmpbuf(png)) == 0);
    png_init_io(png, fp);
    png_set_IHDR(png, info, w, h, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_row(png, row);
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);

    ImageBuffer img = load_image(path);
    REQUIRE(img.width() == 3);
    CHECK(img(0, 0) == rgb_to_luma(255, 0, 0));
    CHECK(img(1, 0) == rgb_to_luma(0, 255, 0));
    CHECK(img(2, 0) == rgb_to_luma(10, 20, 30));
}
#endif

TEST_CASE("method and seed parsing") {
    auto all = parse_methods("all");
    CHECK(all.size() == 25);
    CHECK(sampler_token(all[0].sampler) == "point");
    CHECK(kernel_token(all[0].sampler.kernel) == "nearest");
    CHECK(sampler_token(all[24].sampler) == "fast:16");
    CHECK(kernel_token(all[24].sampler.kernel) == "hermite");

    auto two = parse_methods("point+bilinear,fast:8:3+bicubic:-0.75");
    REQUIRE(two.size() == 2);
    CHECK(two[1].sampler.max_samples == 8);
    CHECK(two[1].sampler.kernel.alpha == -0.75);

    CHECK_THROWS_AS(parse_methods("pointbilinear"), usage_error);
    CHECK_THROWS_AS(parse_methods(""), usage_error);

    auto count = parse_seeds("4");
    CHECK(count == std::vector<std::uint64_t>{1, 2, 3, 4});
    auto listed = parse_seeds("9,2,5");
    CHECK(listed == std::vector<std::uint64_t>{9, 2, 5});
    CHECK_THROWS_AS(parse_seeds("x"), usage_error);
}

TEST_CASE("benchmark over a constant corpus reports infinite PSNR") {
    TempDir tmp("benchconst");
    save_image(ImageBuffer(48, 48, 77), (tmp.path / "c.pgm").string());

    BenchConfig cfg;
    cfg.corpus_dir = tmp.path.string();
    cfg.seeds = {1};
    cfg.methods = parse_methods("point+bilinear,mip+nearest");
    cfg.repetitions = 1;
    BenchReport report = run_benchmark(cfg);
    REQUIRE(report.rows.size() == 2);
    for (const auto& row : report.rows) CHECK(row.psnr_infinite);

    std::string csv = emit_report(report, "csv");
    CHECK(csv.find(",inf,") != std::string::npos);
    std::string json = emit_report(report, "json");
    CHECK(json.find("\"psnr_db\": null") != std::string::npos);
}

TEST_CASE("benchmark rows follow sampler-major kernel-minor order") {
    TempDir tmp("benchorder");
    save_image(testutil::document_image(48, 48, 3), (tmp.path / "d.pgm").string());

    BenchConfig cfg;
    cfg.corpus_dir = tmp.path.string();
    cfg.seeds = {2};
    cfg.methods = parse_methods("fast:16+bilinear,point+hermite,point+nearest,mip+bicubic");
    cfg.repetitions = 1;
    BenchReport report = run_benchmark(cfg);
    REQUIRE(report.rows.size() == 4);
    CHECK(report.rows[0].sampler == "point");
    CHECK(report.rows[0].kernel == "nearest");
    CHECK(report.rows[1].sampler == "point");
    CHECK(report.rows[1].kernel == "hermite");
    CHECK(report.rows[2].sampler == "mip");
    CHECK(report.rows[3].sampler == "fast:16");
}

TEST_CASE("bilinear beats nearest under point sampling on documents") {
    TempDir tmp("benchord2");
    for (std::uint64_t i = 1; i <= 2; ++i) {
        save_image(testutil::document_image(96, 96, i),
                   (tmp.path / ("d" + std::to_string(i) + ".pgm")).string());
    }
    BenchConfig cfg;
    cfg.corpus_dir = tmp.path.string();
    cfg.seeds = {1, 2, 3};
    cfg.methods = parse_methods("point+nearest,point+bilinear");
    cfg.repetitions = 1;
    BenchReport report = run_benchmark(cfg);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[1].psnr_db > report.rows[0].psnr_db);
}

TEST_CASE("supersampling beats point sampling where reconstruction aliases") {
    // Nearest-pixel reconstruction aliases hard on synthetic high-frequency
    // content, so the 49-sample box average has to win that row. Smoother
    // kernels trade aliasing against double blur and can tie either way.
    TempDir tmp("benchaa");
    save_image(testutil::checkerboard(64, 64), (tmp.path / "cb.pgm").string());
    save_image(testutil::zone_plate(64), (tmp.path / "zp.pgm").string());

    BenchConfig cfg;
    cfg.corpus_dir = tmp.path.string();
    cfg.seeds = {1, 2};
    cfg.methods = parse_methods("point+nearest,super:7+nearest");
    cfg.repetitions = 1;
    BenchReport report = run_benchmark(cfg);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[1].psnr_db >= report.rows[0].psnr_db);
}

TEST_CASE("benchmark PSNR columns are deterministic across runs") {
    TempDir tmp("benchdet");
    save_image(testutil::document_image(64, 64, 11), (tmp.path / "d.pgm").string());

    BenchConfig cfg;
    cfg.corpus_dir = tmp.path.string();
    cfg.seeds = {4, 5};
    cfg.methods = parse_methods("point+bilinear,mip+bilinear,fast:16:9+bicubic");
    cfg.repetitions = 2;

    auto extract_psnr = [](const BenchReport& r) {
        std::vector<std::string> cols;
        for (const auto& line : split_lines(emit_report(r, "csv"))) {
            auto fields = split_csv(line);
            REQUIRE(fields.size() == 7);
            cols.push_back(fields[3]);
        }
        return cols;
    };
    auto a = extract_psnr(run_benchmark(cfg));
    auto b = extract_psnr(run_benchmark(cfg));
    cfg.threads = 3;
    auto c = extract_psnr(run_benchmark(cfg));
    CHECK(a == b);
    CHECK(a == c);

    // Samples-per-pixel column mirrors the sampling table.
    BenchReport r = run_benchmark(cfg);
    CHECK(r.rows[0].samples_per_pixel == doctest::Approx(1.0));
    CHECK(r.rows[1].samples_per_pixel == doctest::Approx(2.0));
    CHECK(r.rows[2].samples_per_pixel <= 16.0);
    CHECK(r.rows[2].samples_per_pixel >= 1.0);
}

TEST_CASE("csv header and shape") {
    BenchReport r;
    BenchRow row;
    row.sampler = "point";
    row.kernel = "bilinear";
    row.time_s = 0.25;
    row.psnr_db = 30.5;
    row.taps_per_pixel = 4;
    row.samples_per_pixel = 1;
    r.rows.push_back(row);
    std::string csv = emit_report(r, "csv");
    auto lines = split_lines(csv);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] ==
          "sampler,kernel,time_s,psnr_db,taps_per_pixel,samples_per_pixel,pyramid_build_s");
    CHECK(lines[1].rfind("point,bilinear,0.250000,30.500000,", 0) == 0);
    CHECK_THROWS_AS(emit_report(r, "yaml"), usage_error);
}

TEST_CASE("benchmark config validation") {
    BenchConfig cfg;
    cfg.corpus_dir = "/nonexistent/projwarp";
    cfg.seeds = {1};
    CHECK_THROWS_AS(run_benchmark(cfg), usage_error);  // empty methods

    cfg.methods = parse_methods("point+bilinear");
    CHECK_THROWS_AS(run_benchmark(cfg), data_error);  // unreadable corpus

    TempDir tmp("benchempty");
    cfg.corpus_dir = tmp.path.string();
    CHECK_THROWS_AS(run_benchmark(cfg), data_error);  // no images
}
