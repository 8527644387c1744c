#include "hilco/mmio.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hilco {

namespace {

std::string nextDataLine(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '%') continue;
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
        if (!blank) return line;
    }
    throw std::runtime_error("matrix market: unexpected end of file");
}

void printEntry(std::ostream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
}

}  // namespace

Matrix readMatrixMarket(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string header;
    if (!std::getline(in, header) || header.rfind("%%MatrixMarket", 0) != 0)
        throw std::runtime_error(path + ": missing MatrixMarket banner");
    std::istringstream hs(header);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (object != "matrix")
        throw std::runtime_error(path + ": unsupported object " + object);
    if (field != "real" && field != "integer")
        throw std::runtime_error(path + ": unsupported field " + field);
    const bool coordinate = format == "coordinate";
    if (!coordinate && format != "array")
        throw std::runtime_error(path + ": unsupported format " + format);
    const bool sym = symmetry == "symmetric";
    const bool skew = symmetry == "skew-symmetric";
    if (!sym && !skew && symmetry != "general")
        throw std::runtime_error(path + ": unsupported symmetry " + symmetry);

    std::istringstream sizes(nextDataLine(in));
    long rows = 0, cols = 0, nnz = 0;
    sizes >> rows >> cols;
    if (coordinate) sizes >> nnz;
    if (!sizes || rows < 0 || cols < 0)
        throw std::runtime_error(path + ": bad size line");

    Matrix m = Matrix::Zero(rows, cols);
    if (coordinate) {
        for (long e = 0; e < nnz; ++e) {
            std::istringstream ls(nextDataLine(in));
            long i = 0, j = 0;
            double v = 0;
            ls >> i >> j >> v;
            if (!ls || i < 1 || i > rows || j < 1 || j > cols)
                throw std::runtime_error(path + ": bad coordinate entry");
            m(i - 1, j - 1) = v;
            if (sym && i != j) m(j - 1, i - 1) = v;
            if (skew && i != j) m(j - 1, i - 1) = -v;
        }
    } else {
        // Array format is column-major; symmetric variants store the lower
        // triangle only.
        for (long j = 0; j < cols; ++j) {
            const long ibegin = (sym || skew) ? j : 0;
            for (long i = ibegin; i < rows; ++i) {
                std::istringstream ls(nextDataLine(in));
                double v = 0;
                ls >> v;
                if (!ls) throw std::runtime_error(path + ": bad array entry");
                m(i, j) = v;
                if (sym && i != j) m(j, i) = v;
                if (skew && i != j) m(j, i) = -v;
            }
        }
    }
    return m;
}

Vector readVectorMarket(const std::string& path) {
    Matrix m = readMatrixMarket(path);
    if (m.cols() != 1)
        throw std::runtime_error(path + ": expected a one-column vector");
    return m.col(0);
}

void writeMatrixMarketCoordinate(const std::string& path, const Matrix& m) {
    std::ostringstream out;
    long nnz = 0;
    for (long j = 0; j < m.cols(); ++j)
        for (long i = 0; i < m.rows(); ++i)
            if (m(i, j) != 0.0) ++nnz;
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << " " << m.cols() << " " << nnz << "\n";
    for (long j = 0; j < m.cols(); ++j)
        for (long i = 0; i < m.rows(); ++i)
            if (m(i, j) != 0.0) {
                out << (i + 1) << " " << (j + 1) << " ";
                printEntry(out, m(i, j));
                out << "\n";
            }
    atomicWriteFile(path, out.str());
}

void writeMatrixMarketArray(const std::string& path, const Matrix& m) {
    std::ostringstream out;
    out << "%%MatrixMarket matrix array real general\n";
    out << m.rows() << " " << m.cols() << "\n";
    for (long j = 0; j < m.cols(); ++j)
        for (long i = 0; i < m.rows(); ++i) {
            printEntry(out, m(i, j));
            out << "\n";
        }
    atomicWriteFile(path, out.str());
}

void writeVectorMarket(const std::string& path, const Vector& v) {
    writeMatrixMarketArray(path, v);
}

void atomicWriteFile(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw std::runtime_error("rename to " + path + " failed: " + ec.message());
}

}  // namespace hilco
