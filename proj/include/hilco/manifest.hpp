#ifndef HILCO_MANIFEST_HPP
#define HILCO_MANIFEST_HPP

#include <string>

#include "hilco/complexes.hpp"

// Complex manifests: a JSON file listing slot dimensions, Gram file paths
// and map file paths (Matrix Market), relative to the manifest directory.

namespace hilco {

inline constexpr const char* kManifestSchemaVersion = "1";

// Writes <dir>/<name>.json plus the referenced .mtx files.
// Returns the manifest path.
std::string writeComplexManifest(const std::string& dir, const std::string& name,
                                 const HilbertComplex& spec);

HilbertComplex readComplexManifest(const std::string& manifestPath);

}  // namespace hilco

#endif
