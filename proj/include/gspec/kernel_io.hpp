#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "gspec/kernel.hpp"

namespace gspec {

// A kernel read from a definition file together with whether the file
// declares it usable as a graphon.
struct KernelDefinition {
    SpectralKernel kernel;
    bool graphon = false;
};

// Parses {"components": [...], "negative_components": [...], "sup_bound",
// "lipschitz_bound", "graphon"}. Throws ParseError on schema violations and
// InvalidKernelError on invalid spectra.
KernelDefinition kernel_from_json(const nlohmann::json& doc);
KernelDefinition load_kernel_file(const std::filesystem::path& path);

nlohmann::json kernel_to_json(const SpectralKernel& kernel, bool graphon);

// "W1" or "W2"; ParseError otherwise.
PaperKernel parse_paper_kernel(std::string_view name);

}  // namespace gspec
