#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <span>
#include <vector>

#include "projwarp/bench.hpp"
#include "projwarp/engine.hpp"
#include "projwarp/errors.hpp"
#include "projwarp/image_io.hpp"

namespace py = pybind11;
using namespace projwarp;

namespace {

ImageBuffer image_from_array(const py::array& arr) {
    auto a = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>::ensure(arr);
    if (!a || a.ndim() != 2) {
        throw usage_error("image must be a 2-D uint8 array");
    }
    int h = int(a.shape(0));
    int w = int(a.shape(1));
    ImageBuffer img(w, h);
    std::memcpy(img.pixels().data(), a.data(), std::size_t(w) * h);
    return img;
}

py::array_t<std::uint8_t> array_from_image(const ImageBuffer& img) {
    py::array_t<std::uint8_t> a({img.height(), img.width()});
    std::memcpy(a.mutable_data(), img.pixels().data(), img.pixels().size());
    return a;
}

Homography homography_from_obj(const py::object& obj) {
    auto a = py::array_t<double, py::array::c_style | py::array::forcecast>::ensure(obj);
    if (!a || a.size() != 9) {
        throw usage_error("homography must be a 3x3 (or flat 9-element) real array");
    }
    Homography h;
    std::memcpy(h.m.data(), a.data(), 9 * sizeof(double));
    return canonicalized(h);
}

py::array_t<double> array_from_homography(const Homography& h) {
    py::array_t<double> a({3, 3});
    std::memcpy(a.mutable_data(), h.m.data(), 9 * sizeof(double));
    return a;
}

SamplerConfig make_config(const std::string& sampler, const std::string& kernel,
                          int lut_bins) {
    SamplerConfig cfg = parse_sampler_token(sampler);
    cfg.kernel = parse_kernel_token(kernel);
    cfg.lut_bins = lut_bins;
    return cfg;
}

py::dict stats_dict(const TapStats& s) {
    py::dict d;
    d["pixels_processed"] = s.pixels_processed;
    d["interpolation_taps"] = s.interpolation_taps;
    d["structure_samples"] = s.structure_samples;
    d["multiplications"] = s.multiplications;
    d["pyramid_build_seconds"] = s.pyramid_build_seconds;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Projective image warping: interpolation kernels, anti-aliasing samplers, "
              "PSNR benchmarking";

    py::register_exception<usage_error>(m, "UsageError", PyExc_ValueError);
    py::register_exception<data_error>(m, "DataError", PyExc_IOError);
    py::register_exception<numeric_error>(m, "NumericError", PyExc_ArithmeticError);

    m.def("support_radius",
          [](const std::string& kernel) { return support_radius(parse_kernel_token(kernel)); },
          py::arg("kernel"));

    m.def("eval_kernel",
          [](const std::string& kernel, double s) {
              return eval_kernel(parse_kernel_token(kernel), s);
          },
          py::arg("kernel"), py::arg("s"));

    m.def("warp",
          [](const py::array& image, const py::object& matrix, const std::string& sampler,
             const std::string& kernel, py::object out_size, int threads, int lut_bins) {
              WarpRequest req;
              req.source = image_from_array(image);
              req.homography = homography_from_obj(matrix);
              req.sampler = make_config(sampler, kernel, lut_bins);
              req.threads = threads;
              if (out_size.is_none()) {
                  req.out_width = req.source.width();
                  req.out_height = req.source.height();
              } else {
                  auto wh = out_size.cast<std::pair<int, int>>();
                  req.out_width = wh.first;
                  req.out_height = wh.second;
              }
              return array_from_image(warp(req).image);
          },
          py::arg("image"), py::arg("matrix"), py::arg("sampler") = "point",
          py::arg("kernel") = "bilinear", py::arg("out_size") = py::none(),
          py::arg("threads") = 1, py::arg("lut_bins") = 0);

    m.def("warp_with_stats",
          [](const py::array& image, const py::object& matrix, const std::string& sampler,
             const std::string& kernel, py::object out_size, int threads, int lut_bins) {
              WarpRequest req;
              req.source = image_from_array(image);
              req.homography = homography_from_obj(matrix);
              req.sampler = make_config(sampler, kernel, lut_bins);
              req.threads = threads;
              if (out_size.is_none()) {
                  req.out_width = req.source.width();
                  req.out_height = req.source.height();
              } else {
                  auto wh = out_size.cast<std::pair<int, int>>();
                  req.out_width = wh.first;
                  req.out_height = wh.second;
              }
              WarpResult res = warp(req);
              return py::make_tuple(array_from_image(res.image), stats_dict(res.stats));
          },
          py::arg("image"), py::arg("matrix"), py::arg("sampler") = "point",
          py::arg("kernel") = "bilinear", py::arg("out_size") = py::none(),
          py::arg("threads") = 1, py::arg("lut_bins") = 0);

    m.def("warp_chain",
          [](const py::array& image, const py::list& matrices, const std::string& sampler,
             const std::string& kernel, int threads) {
              ImageBuffer src = image_from_array(image);
              std::vector<Homography> hs;
              for (const auto& obj : matrices) {
                  hs.push_back(homography_from_obj(py::reinterpret_borrow<py::object>(obj)));
              }
              SamplerConfig cfg = make_config(sampler, kernel, 0);
              return array_from_image(warp_chain(src, hs, cfg, threads).image);
          },
          py::arg("image"), py::arg("matrices"), py::arg("sampler") = "point",
          py::arg("kernel") = "bilinear", py::arg("threads") = 1);

    m.def("reference_resample",
          [](const py::array& image, const py::object& matrix, std::pair<int, int> out_size) {
              return array_from_image(reference_resample(
                  image_from_array(image), homography_from_obj(matrix), out_size.first,
                  out_size.second));
          },
          py::arg("image"), py::arg("matrix"), py::arg("out_size"));

    m.def("psnr",
          [](const py::array& test, const py::array& reference) {
              return psnr(image_from_array(test), image_from_array(reference));
          },
          py::arg("test"), py::arg("reference"));

    m.def("random_composed_triple",
          [](std::uint64_t seed, int width, int height) {
              auto triple = random_composed_triple(seed, width, height);
              py::list out;
              for (const Homography& h : triple) out.append(array_from_homography(h));
              return out;
          },
          py::arg("seed"), py::arg("width"), py::arg("height"));

    m.def("mip_levels",
          [](const py::array& image) {
              MipPyramid p = build_mipmap(image_from_array(image));
              py::list out;
              for (const ImageBuffer& lvl : p.levels) out.append(array_from_image(lvl));
              return out;
          },
          py::arg("image"));

    m.def("rip_shape",
          [](const py::array& image) {
              RipMap r = build_ripmap(image_from_array(image));
              return std::pair<int, int>{r.levels_x, r.levels_y};
          },
          py::arg("image"));

    m.def("load_image",
          [](const std::string& path) { return array_from_image(load_image(path)); },
          py::arg("path"));

    m.def("save_image",
          [](const py::array& image, const std::string& path) {
              save_image(image_from_array(image), path);
          },
          py::arg("image"), py::arg("path"));
}
