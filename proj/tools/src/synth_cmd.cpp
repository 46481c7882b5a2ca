#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "lmscreen/io.hpp"

namespace lmscreen::cli {

synth::Blobs blob_layout(const synth::SynthSpec& spec, std::size_t count, double sigma) {
  synth::Blobs blobs;
  blobs.sigma = sigma;
  const double half = spec.extent / 2.0;
  for (std::size_t b = 0; b < count; ++b) {
    const double x = spec.extent * static_cast<double>(b + 1) / static_cast<double>(count + 1);
    blobs.centers.emplace_back(x, half, half);
  }
  return blobs;
}

int cmd_synth(const SynthOptions& options, std::ostream& out, std::ostream& err) {
  try {
    DisplacementField field = synth::generate(options.spec);
    if (options.inject_global) {
      const Vec3 offset =
          options.offset ? *options.offset : Vec3(10.0 * synth::displacement_std(field), 0.0, 0.0);
      field = synth::inject_global(field, *options.inject_global, offset);
    }
    if (options.inject_local) {
      field = synth::inject_local(field, *options.inject_local, options.config);
    }
    const std::string csv = io::write_csv(field);
    if (options.output) {
      std::ofstream os(*options.output, std::ios::binary | std::ios::trunc);
      if (!os) {
        err << "error: cannot write " << options.output->string() << "\n";
        return kExitInputError;
      }
      os << csv;
    } else {
      out << csv;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace lmscreen::cli
