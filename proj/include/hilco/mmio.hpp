#ifndef HILCO_MMIO_HPP
#define HILCO_MMIO_HPP

#include <string>

#include "hilco/linmap.hpp"

// Matrix Market readers and writers. Coordinate and array formats are both
// accepted on input (general, symmetric and skew-symmetric); writers emit
// coordinate format for matrices and array format for vectors and Grams.

namespace hilco {

Matrix readMatrixMarket(const std::string& path);
Vector readVectorMarket(const std::string& path);

// Writers go through a temp file and rename on success.
void writeMatrixMarketCoordinate(const std::string& path, const Matrix& m);
void writeMatrixMarketArray(const std::string& path, const Matrix& m);
void writeVectorMarket(const std::string& path, const Vector& v);

// Shared write-to-temp, rename-on-success helper.
void atomicWriteFile(const std::string& path, const std::string& content);

}  // namespace hilco

#endif
