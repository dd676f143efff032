/**
 * @license
 * Copyright 2026 VoxelKit Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "voxelkit/bench.hpp"
#include "voxelkit/core_ops.hpp"
#include "voxelkit/deconv.hpp"
#include "voxelkit/filters.hpp"
#include "voxelkit/io.hpp"
#include "voxelkit/metrics.hpp"
#include "voxelkit/registry.hpp"
#include "voxelkit/segmentation.hpp"
#include "voxelkit/synth.hpp"
#include "voxelkit/transform.hpp"

namespace {

using namespace voxelkit;

constexpr int kOk = 0;
constexpr int kIoError = 2;
constexpr int kBackendMismatch = 3;
constexpr int kBadStructure = 4;
constexpr int kBadNumeric = 5;

int classify(const std::exception& e) {
  if (dynamic_cast<const BadMagic*>(&e) ||
      dynamic_cast<const HeaderMismatch*>(&e) ||
      dynamic_cast<const TruncatedPayload*>(&e))
    return kIoError;
  if (dynamic_cast<const ShapeMismatch*>(&e)) return kBadStructure;
  if (dynamic_cast<const UnnormalizedPsf*>(&e) ||
      dynamic_cast<const NegativeInput*>(&e) ||
      dynamic_cast<const NonPositiveFactor*>(&e) ||
      dynamic_cast<const BadOrder*>(&e) ||
      dynamic_cast<const PlacementFailure*>(&e) ||
      dynamic_cast<const DegenerateImage*>(&e) ||
      dynamic_cast<const DegenerateReference*>(&e) ||
      dynamic_cast<const TooSmall*>(&e) ||
      dynamic_cast<const OddExtent*>(&e) ||
      dynamic_cast<const EvenExtent*>(&e))
    return kBadNumeric;
  if (dynamic_cast<const Error*>(&e)) return kIoError;  // file open/write
  return kBadStructure;
}

std::vector<BackendId> backends_from(const std::string& name) {
  if (name == "reference") return {BackendId::reference};
  if (name == "accelerated") return {BackendId::accelerated};
  return {BackendId::reference, BackendId::accelerated};
}

struct SynthFlags {
  std::vector<std::size_t> shape{32, 128, 128};
  std::size_t objects = 20;
  std::vector<double> radius{6.0, 10.0};
  std::uint64_t seed = 0;
  double noise = 0.05;
  double anisotropy = 1.0;

  synth::SynthSpec spec() const {
    synth::SynthSpec s;
    s.shape = Shape(shape.begin(), shape.end());
    s.n_objects = objects;
    s.radius_min = radius.at(0);
    s.radius_max = radius.size() > 1 ? radius[1] : radius[0];
    s.seed = seed;
    s.noise_sigma = noise;
    s.anisotropy = anisotropy;
    return s;
  }
};

void add_synth_flags(CLI::App* cmd, SynthFlags& f) {
  cmd->add_option("--shape", f.shape, "Volume extents, ZYX")->expected(3);
  cmd->add_option("--objects", f.objects, "Number of objects");
  cmd->add_option("--radius", f.radius, "Radius range MIN MAX (voxels)")
      ->expected(1, 2);
  cmd->add_option("--seed", f.seed, "RNG seed");
  cmd->add_option("--noise", f.noise, "Noise sigma (fraction of range)");
  cmd->add_option("--anisotropy", f.anisotropy, "Z spacing / XY spacing");
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

// Extracts channel `c` of a CZYX volume as a ZYX image.
NdImage channel(const NdImage& stack, std::size_t c) {
  const Shape& s = stack.shape();
  const Shape sub(s.begin() + 1, s.end());
  const std::size_t n = shape_volume(sub);
  const NdImage f = stack.as_f32();
  const auto v = f.f32_values();
  std::vector<float> out(v.begin() + c * n, v.begin() + (c + 1) * n);
  NdImage img = NdImage::f32(sub, std::move(out));
  if (stack.spacing()) {
    const auto& sp = *stack.spacing();
    img = img.with_spacing(std::vector<double>(sp.end() - 3, sp.end()));
  }
  return img;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  SynthFlags synth;
  std::string out_dir;
};

int run_synth(const SynthArgs& args) {
  const auto volume = synth::generate_blobs(args.synth.spec());
  std::filesystem::create_directories(args.out_dir);
  io::write_volume(args.out_dir + "/image.ndiv", volume.intensity);
  io::write_volume(args.out_dir + "/labels.ndiv", volume.labels);
  std::cout << "wrote " << args.out_dir << "/image.ndiv and labels.ndiv ("
            << shape_to_string(volume.intensity.shape()) << ", "
            << args.synth.objects << " objects)\n";
  return kOk;
}

// --------------------------------------------------------- bench-rescale

struct BenchRescaleArgs {
  std::string input;
  bool synthetic = false;
  std::vector<int> orders{0, 1, 2, 3, 4, 5};
  std::vector<double> factors{2.0, 0.5};
  std::string backend = "both";
  int repeats = 3;
  int warmup = 1;
  SynthFlags synth;
  std::string out_dir = ".";
  std::string format = "csv";
};

int run_bench_rescale(const BenchRescaleArgs& args) {
  NdImage img;
  if (!args.input.empty()) {
    img = io::read_volume(args.input);
  } else {
    auto spec = args.synth.spec();
    img = synth::generate_blobs(spec).intensity;
  }
  if (args.factors.size() != 2)
    throw NonPositiveFactor("--factors expects exactly two values");
  const double up = args.factors[0], down = args.factors[1];

  const auto backends = backends_from(args.backend);
  bench::TimingReport report;
  struct Agreement {
    int order;
    double max_abs_diff;
  };
  std::vector<Agreement> agreement;

  for (int order : args.orders) {
    std::vector<NdImage> outputs;
    double ref_median = 0;
    for (BackendId backend : backends) {
      const NdImage input = to_backend(img, backend);
      NdImage result;
      const double median =
          bench::time_median(args.repeats, args.warmup, [&] {
            result = transform::rescale(
                transform::rescale(input, up, order, false), down, order, true);
          });
      if (backend == BackendId::reference) ref_median = median;
      outputs.push_back(result);

      bench::TimingRow row;
      row.workload = "rescale";
      row.stage = "upscale2x_downscale";
      row.backend = to_string(backend);
      row.shape = shape_to_string(img.shape());
      row.params = "order=" + std::to_string(order) +
                   ";factors=" + std::to_string(up) + "," +
                   std::to_string(down);
      row.repeats = args.repeats;
      row.warmup = args.warmup;
      row.median_s = median;
      row.speedup_vs_reference = ref_median > 0 ? ref_median / median : 1.0;
      report.rows.push_back(row);
    }
    if (outputs.size() == 2) {
      const auto a = outputs[0].f32_values();
      const auto b = outputs[1].f32_values();
      double diff = 0;
      for (std::size_t i = 0; i < a.size(); ++i)
        diff = std::max(diff, std::abs(static_cast<double>(a[i]) - b[i]));
      agreement.push_back({order, diff});
    }
  }

  std::filesystem::create_directories(args.out_dir);
  {
    auto out = open_out(args.out_dir + "/timings." + args.format);
    if (args.format == "json") {
      report.to_json(out);
    } else {
      report.to_csv(out);
    }
  }
  bool mismatch = false;
  if (!agreement.empty()) {
    auto out = open_out(args.out_dir + "/agreement.csv");
    out << "order,max_abs_diff\n";
    for (const auto& a : agreement) {
      out << a.order << "," << a.max_abs_diff << "\n";
      std::cout << "order " << a.order
                << " backend max_abs_diff = " << a.max_abs_diff << "\n";
      if (a.max_abs_diff > 1e-4) mismatch = true;
    }
  }
  for (const auto& row : report.rows)
    std::cout << row.stage << " order-params [" << row.params << "] "
              << row.backend << ": " << row.median_s << " s (speedup "
              << row.speedup_vs_reference << ")\n";
  if (mismatch) {
    std::cerr << "backend outputs disagree beyond 1e-4\n";
    return kBackendMismatch;
  }
  return kOk;
}

// ---------------------------------------------------------------- segment

struct SegmentArgs {
  std::string input;
  bool synthetic = false;
  SynthFlags synth;
  std::string backend = "reference";
  std::string out_dir = ".";
  std::string format = "csv";
};

int run_segment(const SegmentArgs& args) {
  NdImage membrane, mito, dna;
  LabelImage truth;
  bool have_truth = false;

  if (!args.input.empty()) {
    const NdImage stack = io::read_volume(args.input);
    if (stack.rank() != 4 || stack.extent(0) != 3) {
      std::cerr << "segment expects a 3-channel CZYX volume "
                   "(membrane, mitochondria, DNA)\n";
      return kBadStructure;
    }
    membrane = channel(stack, 0);
    mito = channel(stack, 1);
    dna = channel(stack, 2);
  } else {
    SynthFlags flags = args.synth;
    if (flags.shape == std::vector<std::size_t>{32, 128, 128} &&
        flags.radius == std::vector<double>{6.0, 10.0}) {
      // segmentation default: larger volume, nuclei that survive ball-5
      // median filtering at half resolution
      flags.shape = {48, 192, 192};
      flags.radius = {12.0, 15.0};
    }
    const auto phantom = synth::generate_monolayer_phantom(flags.spec());
    membrane = phantom.membrane;
    mito = phantom.mitochondria;
    dna = phantom.dna;
    truth = phantom.nuclei;
    have_truth = true;
  }

  const auto backends = backends_from(args.backend);
  bench::TimingReport report;
  LabelImage nuclei, cells;
  std::vector<std::string> label_files;

  for (BackendId backend : backends) {
    seg::StageTimes nuclei_times, cell_times;
    const NdImage dna_b = to_backend(dna, backend);
    nuclei = seg::segment_nuclei(dna_b, &nuclei_times);
    cells = seg::segment_cells(to_backend(membrane, backend),
                               to_backend(mito, backend), dna_b, nuclei,
                               &cell_times);
    auto add_rows = [&](const char* workload, const seg::StageTimes& times) {
      for (const auto& t : times) {
        bench::TimingRow row;
        row.workload = workload;
        row.stage = t.stage;
        row.backend = to_string(backend);
        row.shape = shape_to_string(dna.shape());
        row.params = "pipeline";
        row.repeats = 1;
        row.warmup = 0;
        row.median_s = t.seconds;
        row.speedup_vs_reference = 0;
        report.rows.push_back(row);
      }
    };
    add_rows("segment_nuclei", nuclei_times);
    add_rows("segment_cells", cell_times);
  }

  // speedup per (workload, stage) when both backends ran
  for (auto& row : report.rows) {
    if (row.backend != to_string(BackendId::accelerated)) {
      row.speedup_vs_reference = 1.0;
      continue;
    }
    for (const auto& ref : report.rows) {
      if (ref.backend == to_string(BackendId::reference) &&
          ref.workload == row.workload && ref.stage == row.stage) {
        row.speedup_vs_reference =
            row.median_s > 0 ? ref.median_s / row.median_s : 0.0;
        break;
      }
    }
  }

  std::filesystem::create_directories(args.out_dir);
  io::write_volume(args.out_dir + "/nuclei.ndiv", nuclei);
  io::write_volume(args.out_dir + "/cells.ndiv", cells);
  {
    auto out = open_out(args.out_dir + "/timings." + args.format);
    if (args.format == "json") {
      report.to_json(out);
    } else {
      report.to_csv(out);
    }
  }

  std::vector<bench::MetricEntry> entries;
  if (have_truth) {
    const double ap = metrics::average_precision(nuclei, truth, 0.5);
    const auto quality = metrics::masked_quality(dna, dna, nuclei, truth);
    entries.push_back({"nuclei_ap@0.5", ap, "iou_threshold=0.5"});
    entries.push_back({"masked_psnr", quality.psnr, "dna masked by pred/truth"});
    entries.push_back({"masked_ssim", quality.ssim, "dna masked by pred/truth"});
    std::cout << "nuclei AP@0.5 = " << ap << "\n";
  }
  {
    std::uint32_t max_label = 0;
    for (auto v : cells.values<std::uint32_t>())
      max_label = std::max(max_label, v);
    entries.push_back({"cell_count", static_cast<double>(max_label),
                       "labels keep nucleus ids"});
  }
  auto out = open_out(args.out_dir + "/metrics.json");
  bench::write_metrics_json(out, entries);
  std::cout << "wrote nuclei.ndiv, cells.ndiv, timings." << args.format
            << ", metrics.json\n";
  return kOk;
}

// -------------------------------------------------------------- deconvolve

struct DeconvolveArgs {
  std::string input;
  bool synthetic = false;
  SynthFlags synth;
  std::string psf_path;
  std::vector<double> gaussian_sigmas;
  std::string metric = "frc";
  double rel_tol = 1e-3;
  int patience = 3;
  int max_iters = 100;
  bool flat_init = false;
  std::string backend = "reference";
  std::string out_dir = ".";
};

deconv::StopMetric metric_from(const std::string& name) {
  if (name == "si_psnr") return deconv::StopMetric::si_psnr_vs_input;
  if (name == "ssim") return deconv::StopMetric::ssim_vs_prev;
  return deconv::StopMetric::frc_resolution;
}

int run_deconvolve(const DeconvolveArgs& args) {
  NdImage psf;
  if (!args.psf_path.empty()) {
    psf = io::read_volume(args.psf_path);
  } else {
    std::vector<double> sigmas = args.gaussian_sigmas;
    if (sigmas.empty()) sigmas = {1.0, 2.0, 2.0};
    Shape shape(sigmas.size());
    for (std::size_t a = 0; a < sigmas.size(); ++a)
      shape[a] = 2 * static_cast<std::size_t>(std::ceil(4.0 * sigmas[a])) + 1;
    psf = synth::gaussian_psf(shape, sigmas);
  }

  NdImage observed;
  NdImage truth;
  bool have_truth = false;
  if (!args.input.empty()) {
    observed = io::read_volume(args.input);
  } else {
    SynthFlags flags = args.synth;
    if (flags.shape == std::vector<std::size_t>{32, 128, 128})
      flags.shape = {24, 96, 96};
    auto spec = flags.spec();
    const auto volume = synth::generate_blobs(spec);
    truth = volume.intensity;
    have_truth = true;
    observed = vmax(filters::fft_convolve(truth, psf, false), 0.0f);
  }

  deconv::StoppingRule rule;
  rule.metric = metric_from(args.metric);
  rule.rel_tol = args.rel_tol;
  rule.patience = args.patience;
  rule.max_iters = args.max_iters;

  const BackendId backend = args.backend == "accelerated"
                                ? BackendId::accelerated
                                : BackendId::reference;
  const auto result = deconv::richardson_lucy(to_backend(observed, backend),
                                              psf, rule, args.flat_init);

  std::filesystem::create_directories(args.out_dir);
  io::write_volume(args.out_dir + "/estimate.ndiv", result.estimate);
  {
    auto out = open_out(args.out_dir + "/trace.csv");
    result.trace.to_csv(out);
  }
  {
    nlohmann::json summary;
    summary["schema"] = 1;
    summary["iters_run"] = result.trace.records.size();
    const double final_metric = result.trace.records.empty()
                                    ? 0.0
                                    : result.trace.records.back().value;
    if (std::isinf(final_metric)) {
      summary["final_metric"] = final_metric > 0 ? "inf" : "-inf";
    } else {
      summary["final_metric"] = final_metric;
    }
    summary["stop_reason"] = result.trace.stop_reason;
    summary["metric"] = deconv::to_string(rule.metric);
    summary["fft_shape"] = result.trace.fft_shape;
    summary["backend"] = to_string(backend);
    if (have_truth) {
      summary["si_psnr_blurred_vs_truth"] = metrics::si_psnr(observed, truth);
      summary["si_psnr_estimate_vs_truth"] =
          metrics::si_psnr(result.estimate, truth);
    }
    auto out = open_out(args.out_dir + "/summary.json");
    out << summary.dump(2) << "\n";
  }
  std::cout << "stopped after " << result.trace.records.size()
            << " iterations (" << result.trace.stop_reason << ")\n";
  return kOk;
}

// ------------------------------------------------------------ export-slice

struct ExportSliceArgs {
  std::string input;
  std::size_t axis = 0;
  std::size_t index = 0;
  std::string out = "slice.pgm";
};

int run_export_slice(const ExportSliceArgs& args) {
  const NdImage img = io::read_volume(args.input);
  io::export_slice(img, args.axis, args.index, args.out);
  std::cout << "wrote " << args.out << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "voxelkit: device-agnostic N-D image processing benchmarks "
      "(rescaling, 3D segmentation, Richardson-Lucy deconvolution)"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic volume");
  add_synth_flags(synth_cmd, synth_args.synth);
  synth_cmd->add_option("--out", synth_args.out_dir, "Output directory")
      ->required();

  BenchRescaleArgs rescale_args;
  auto* rescale_cmd =
      app.add_subcommand("bench-rescale", "Time spline rescaling per order");
  rescale_cmd->add_option("--input", rescale_args.input, "NDIV input volume");
  rescale_cmd->add_flag("--synthetic", rescale_args.synthetic,
                        "Use a synthetic volume (default when no input)");
  rescale_cmd->add_option("--orders", rescale_args.orders, "Spline orders");
  rescale_cmd->add_option("--factors", rescale_args.factors,
                          "Up and down factors")
      ->expected(2);
  rescale_cmd->add_option("--backend", rescale_args.backend,
                          "reference|accelerated|both");
  rescale_cmd->add_option("--repeats", rescale_args.repeats, "Timed repeats");
  rescale_cmd->add_option("--warmup", rescale_args.warmup, "Warmup runs");
  add_synth_flags(rescale_cmd, rescale_args.synth);
  rescale_cmd->add_option("--out", rescale_args.out_dir, "Output directory");
  rescale_cmd->add_option("--format", rescale_args.format, "csv|json");
  rescale_args.synth.shape = {60, 256, 256};
  rescale_args.synth.radius = {8.0, 14.0};
  rescale_args.synth.objects = 25;

  SegmentArgs segment_args;
  auto* segment_cmd =
      app.add_subcommand("segment", "Two-stage 3D monolayer segmentation");
  segment_cmd->add_option("--input", segment_args.input,
                          "3-channel CZYX NDIV volume");
  segment_cmd->add_flag("--synthetic", segment_args.synthetic,
                        "Use a synthetic phantom (default when no input)");
  add_synth_flags(segment_cmd, segment_args.synth);
  segment_cmd->add_option("--backend", segment_args.backend,
                          "reference|accelerated|both");
  segment_cmd->add_option("--out", segment_args.out_dir, "Output directory");
  segment_cmd->add_option("--format", segment_args.format, "csv|json");

  DeconvolveArgs deconv_args;
  auto* deconv_cmd = app.add_subcommand(
      "deconvolve", "Richardson-Lucy deconvolution with metric stopping");
  deconv_cmd->add_option("--input", deconv_args.input, "NDIV input volume");
  deconv_cmd->add_flag("--synthetic", deconv_args.synthetic,
                       "Use a blurred synthetic volume (default when no input)");
  add_synth_flags(deconv_cmd, deconv_args.synth);
  deconv_cmd->add_option("--psf", deconv_args.psf_path, "NDIV PSF volume");
  deconv_cmd->add_option("--gaussian", deconv_args.gaussian_sigmas,
                         "Gaussian PSF sigmas (ZYX)")
      ->expected(1, 3);
  deconv_cmd->add_option("--metric", deconv_args.metric,
                         "si_psnr|ssim|frc stopping metric");
  deconv_cmd->add_option("--rel-tol", deconv_args.rel_tol,
                         "Relative improvement tolerance");
  deconv_cmd->add_option("--patience", deconv_args.patience,
                         "Consecutive below-tolerance iterations");
  deconv_cmd->add_option("--max-iters", deconv_args.max_iters,
                         "Iteration cap");
  deconv_cmd->add_flag("--flat-init", deconv_args.flat_init,
                       "Start from the observed mean");
  deconv_cmd->add_option("--backend", deconv_args.backend,
                         "reference|accelerated");
  deconv_cmd->add_option("--out", deconv_args.out_dir, "Output directory");

  ExportSliceArgs slice_args;
  auto* slice_cmd =
      app.add_subcommand("export-slice", "Export one slice as 8-bit PGM");
  slice_cmd->add_option("--input", slice_args.input, "NDIV input volume")
      ->required();
  slice_cmd->add_option("--axis", slice_args.axis, "Slice axis (0=Z)");
  slice_cmd->add_option("--index", slice_args.index, "Slice index");
  slice_cmd->add_option("--out", slice_args.out, "Output PGM path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth_cmd) return run_synth(synth_args);
    if (*rescale_cmd) return run_bench_rescale(rescale_args);
    if (*segment_cmd) return run_segment(segment_args);
    if (*deconv_cmd) return run_deconvolve(deconv_args);
    if (*slice_cmd) return run_export_slice(slice_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify(e);
  }
  return kOk;
}
