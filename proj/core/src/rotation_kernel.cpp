#include "finrot/rotation_kernel.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>

#include "finrot/parallel.hpp"
#include "finrot/polar_basis.hpp"

namespace finrot {
namespace {

constexpr char kMagic[8] = {'F', 'I', 'N', 'R', 'O', 'T', '1', '\0'};
constexpr double kHardImagLimit = 1e-6;

struct ModeBlock {
    int lo;                  // lowest n_x in the block
    int size;                // min(n, 4j-n) + 1
    std::vector<double> dt;  // block-size^2, transpose of d(2 theta), row-major
};

// Per-block little-d factors, computed once per kernel build and shared read-only
// by every output row.
std::vector<ModeBlock> build_mode_blocks(OscillatorRep rep, double theta) {
    const int two_j = rep.two_j();
    const int four_j = 2 * two_j;
    std::vector<ModeBlock> blocks(four_j + 1);
    for (int n = 0; n <= four_j; ++n) {
        ModeBlock& blk = blocks[n];
        blk.lo = std::max(0, n - two_j);
        blk.size = std::min(n, four_j - n) + 1;
        const auto d = wigner_d_matrix(blk.size - 1, 2.0 * theta);
        blk.dt.resize(d.size());
        for (int r = 0; r < blk.size; ++r) {
            for (int c = 0; c < blk.size; ++c) {
                blk.dt[static_cast<std::size_t>(c) * blk.size + r] =
                    d[static_cast<std::size_t>(r) * blk.size + c];
            }
        }
    }
    return blocks;
}

std::uint64_t fnv1a64(const unsigned char* data, std::size_t size) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

void write_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t read_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t read_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

static_assert(std::endian::native == std::endian::little,
              "kernel cache I/O assumes a little-endian host");

}  // namespace

RotationKernel build_kernel_cartesian(OscillatorRep rep, double theta,
                                      const WavefunctionTable& table, unsigned threads) {
    if (table.rep() != rep) {
        throw DomainError("build_kernel_cartesian: table built for a different representation");
    }
    const int n_side = rep.size();
    const std::size_t dim = static_cast<std::size_t>(n_side) * n_side;
    const auto blocks = build_mode_blocks(rep, theta);
    const double* w = table.values().data();

    RotationKernel kernel{rep, theta, std::vector<double>(dim * dim)};

    // Independent sum per output row p = (i_x, i_y):
    //   1. row of the mode-space image of the kernel: for every block n,
    //      u[r] = Psi_{lo+r}(q_x) Psi_{n-lo-r}(q_y), segment = u * dt_n
    //   2. back to pixels through the separable transform W^T M W.
    parallel_for(dim, threads, [&](std::size_t begin, std::size_t end) {
        std::vector<double> mode_row(dim);      // scattered to M[n_x][n_y]
        std::vector<double> u(n_side);
        std::vector<double> seg(n_side);
        std::vector<double> tmp(dim);           // W^T * M
        for (std::size_t p = begin; p < end; ++p) {
            const int ix = static_cast<int>(p) / n_side;
            const int iy = static_cast<int>(p) % n_side;

            std::fill(mode_row.begin(), mode_row.end(), 0.0);
            for (int n_total = 0; n_total < static_cast<int>(blocks.size()); ++n_total) {
                const ModeBlock& blk = blocks[n_total];
                const int b = blk.size;
                for (int r = 0; r < b; ++r) {
                    const int nx = blk.lo + r;
                    u[r] = w[static_cast<std::size_t>(nx) * n_side + ix] *
                           w[static_cast<std::size_t>(n_total - nx) * n_side + iy];
                }
                // seg[c] = sum_r u[r] * dt[r][c]; M[nx'][ny'] with nx' = lo+c
                // lives at mode_row[nx' * N + (n - nx')]
                std::fill(seg.begin(), seg.begin() + b, 0.0);
                for (int r = 0; r < b; ++r) {
                    const double f = u[r];
                    const double* dtrow = blk.dt.data() + static_cast<std::size_t>(r) * b;
                    for (int c = 0; c < b; ++c) seg[c] += f * dtrow[c];
                }
                for (int c = 0; c < b; ++c) {
                    const int nxp = blk.lo + c;
                    mode_row[static_cast<std::size_t>(nxp) * n_side + (n_total - nxp)] = seg[c];
                }
            }

            // tmp[ixp][ny] = sum_nx W[nx][ixp] * M[nx][ny]
            std::fill(tmp.begin(), tmp.end(), 0.0);
            for (int nx = 0; nx < n_side; ++nx) {
                const double* mrow = mode_row.data() + static_cast<std::size_t>(nx) * n_side;
                const double* wrow = w + static_cast<std::size_t>(nx) * n_side;
                for (int ixp = 0; ixp < n_side; ++ixp) {
                    const double f = wrow[ixp];
                    double* trow = tmp.data() + static_cast<std::size_t>(ixp) * n_side;
                    for (int ny = 0; ny < n_side; ++ny) trow[ny] += f * mrow[ny];
                }
            }
            // out[ixp][iyp] = sum_ny tmp[ixp][ny] * W[ny][iyp]
            double* out = kernel.matrix.data() + p * dim;
            std::fill(out, out + dim, 0.0);
            for (int ixp = 0; ixp < n_side; ++ixp) {
                const double* trow = tmp.data() + static_cast<std::size_t>(ixp) * n_side;
                double* orow = out + static_cast<std::size_t>(ixp) * n_side;
                for (int ny = 0; ny < n_side; ++ny) {
                    const double f = trow[ny];
                    const double* wrow = w + static_cast<std::size_t>(ny) * n_side;
                    for (int iyp = 0; iyp < n_side; ++iyp) orow[iyp] += f * wrow[iyp];
                }
            }
        }
    });
    return kernel;
}

RotationKernel build_kernel_polar(OscillatorRep rep, double theta, const WavefunctionTable& table,
                                  unsigned threads, double* max_imag_residue) {
    if (table.rep() != rep) {
        throw DomainError("build_kernel_polar: table built for a different representation");
    }
    const int n_side = rep.size();
    const std::size_t dim = static_cast<std::size_t>(n_side) * n_side;
    const auto modes = build_polar_basis(rep, table, threads);

    std::vector<std::complex<double>> phases(modes.size());
    for (std::size_t k = 0; k < modes.size(); ++k) {
        phases[k] = std::polar(1.0, -modes[k].index.m * theta);
    }

    RotationKernel kernel{rep, theta, std::vector<double>(dim * dim)};
    std::vector<double> imag_max(effective_threads(threads), 0.0);

    // R[p][p'] = sum_k Lambda_k[p] e^{-i m_k theta} conj(Lambda_k[p'])
    std::atomic<unsigned> worker_id{0};
    parallel_for(dim, threads, [&](std::size_t begin, std::size_t end) {
        const unsigned wid = worker_id.fetch_add(1);
        std::vector<std::complex<double>> acc(dim);
        double local_imag = 0.0;
        for (std::size_t p = begin; p < end; ++p) {
            std::fill(acc.begin(), acc.end(), std::complex<double>(0.0, 0.0));
            for (std::size_t k = 0; k < modes.size(); ++k) {
                const std::complex<double> lead = modes[k].values[p] * phases[k];
                const std::complex<double>* vals = modes[k].values.data();
                for (std::size_t q = 0; q < dim; ++q) {
                    acc[q] += lead * std::conj(vals[q]);
                }
            }
            double* out = kernel.matrix.data() + p * dim;
            for (std::size_t q = 0; q < dim; ++q) {
                local_imag = std::max(local_imag, std::abs(acc[q].imag()));
                out[q] = acc[q].real();
            }
        }
        if (wid < imag_max.size()) imag_max[wid] = local_imag;
    });

    double residue = 0.0;
    for (double v : imag_max) residue = std::max(residue, v);
    if (max_imag_residue != nullptr) *max_imag_residue = residue;
    if (residue > kHardImagLimit) {
        throw ConsistencyError("build_kernel_polar: imaginary residue " + std::to_string(residue) +
                               " exceeds 1e-6; polar basis is inconsistent");
    }
    return kernel;
}

MonoImage apply_kernel(const RotationKernel& kernel, const MonoImage& image, unsigned threads) {
    if (image.rep() != kernel.rep) {
        throw DomainError("apply_kernel: image dimensions do not match the kernel");
    }
    const std::size_t dim = kernel.dim();
    std::vector<double> out(dim);
    const double* m = kernel.matrix.data();
    const double* f = image.pixels().data();
    parallel_for(dim, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            const double* row = m + p * dim;
            double acc = 0.0;
            for (std::size_t q = 0; q < dim; ++q) acc += row[q] * f[q];
            out[p] = acc;
        }
    });
    return MonoImage(image.rep(), PixelDomain::data, std::move(out));
}

double compose_check(const RotationKernel& k1, const RotationKernel& k2, unsigned threads) {
    if (k1.rep != k2.rep) {
        throw DomainError("compose_check: kernels have different representations");
    }
    const WavefunctionTable table(k1.rep);
    const RotationKernel sum = build_kernel_cartesian(k1.rep, k1.theta + k2.theta, table, threads);
    const std::size_t dim = k1.dim();
    std::vector<double> worst(effective_threads(threads), 0.0);
    std::atomic<unsigned> worker_id{0};
    parallel_for(dim, threads, [&](std::size_t begin, std::size_t end) {
        const unsigned wid = worker_id.fetch_add(1);
        double local = 0.0;
        for (std::size_t r = begin; r < end; ++r) {
            const double* row1 = k1.matrix.data() + r * dim;
            for (std::size_t c = 0; c < dim; ++c) {
                double acc = 0.0;
                for (std::size_t t = 0; t < dim; ++t) acc += row1[t] * k2.matrix[t * dim + c];
                local = std::max(local, std::abs(acc - sum.matrix[r * dim + c]));
            }
        }
        if (wid < worst.size()) worst[wid] = local;
    });
    double res = 0.0;
    for (double v : worst) res = std::max(res, v);
    return res;
}

std::uint64_t kernel_payload_checksum(const RotationKernel& kernel) {
    return fnv1a64(reinterpret_cast<const unsigned char*>(kernel.matrix.data()),
                   kernel.matrix.size() * sizeof(double));
}

void save_kernel(const RotationKernel& kernel, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("save_kernel: cannot open " + path.string() + " for writing");
    os.write(kMagic, sizeof(kMagic));
    write_u32(os, static_cast<std::uint32_t>(kernel.rep.two_j()));
    write_u32(os, 0u);  // flattening flag: 0 = row-major, i_x major
    const std::uint64_t theta_bits = std::bit_cast<std::uint64_t>(kernel.theta);
    write_u64(os, theta_bits);
    os.write(reinterpret_cast<const char*>(kernel.matrix.data()),
             static_cast<std::streamsize>(kernel.matrix.size() * sizeof(double)));
    write_u64(os, kernel_payload_checksum(kernel));
    if (!os) throw IoError("save_kernel: write to " + path.string() + " failed");
}

RotationKernel load_kernel(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("load_kernel: cannot open " + path.string());

    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw FormatError("load_kernel: bad magic in " + path.string());
    }
    const std::uint32_t two_j = read_u32(is);
    const std::uint32_t flatten = read_u32(is);
    const std::uint64_t theta_bits = read_u64(is);
    if (!is) throw FormatError("load_kernel: truncated header in " + path.string());
    if (flatten != 0) {
        throw FormatError("load_kernel: unsupported flattening flag in " + path.string());
    }
    if (two_j > 4096) {
        throw FormatError("load_kernel: implausible dimension in " + path.string());
    }

    OscillatorRep rep = OscillatorRep::from_two_j(static_cast<int>(two_j));
    RotationKernel kernel{rep, std::bit_cast<double>(theta_bits), {}};
    const std::size_t dim = kernel.dim();
    kernel.matrix.resize(dim * dim);
    is.read(reinterpret_cast<char*>(kernel.matrix.data()),
            static_cast<std::streamsize>(kernel.matrix.size() * sizeof(double)));
    if (!is || static_cast<std::size_t>(is.gcount()) != kernel.matrix.size() * sizeof(double)) {
        throw FormatError("load_kernel: truncated payload in " + path.string());
    }
    const std::uint64_t stored = read_u64(is);
    if (!is) throw FormatError("load_kernel: missing checksum in " + path.string());
    char extra;
    if (is.read(&extra, 1), is.gcount() != 0) {
        throw FormatError("load_kernel: trailing bytes in " + path.string());
    }
    if (stored != kernel_payload_checksum(kernel)) {
        throw FormatError("load_kernel: checksum mismatch in " + path.string());
    }
    return kernel;
}

std::shared_ptr<const RotationKernel> DirectKernelProvider::get(OscillatorRep rep, double theta) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (last_ && last_->rep == rep && last_->theta == theta) return last_;
    const WavefunctionTable table(rep);
    last_ = std::make_shared<const RotationKernel>(
        build_kernel_cartesian(rep, theta, table, threads_));
    return last_;
}

CachingKernelProvider::CachingKernelProvider(std::filesystem::path dir, unsigned threads)
    : dir_(std::move(dir)), threads_(threads) {}

std::filesystem::path CachingKernelProvider::cache_file_name(OscillatorRep rep, double theta) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "kernel-2j%d-theta%016llx.finrot", rep.two_j(),
                  static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(theta)));
    return std::filesystem::path(buf);
}

std::shared_ptr<const RotationKernel> CachingKernelProvider::get(OscillatorRep rep, double theta) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (last_ && last_->rep == rep && last_->theta == theta) return last_;

    const auto file = dir_ / cache_file_name(rep, theta);
    std::error_code ec;
    if (std::filesystem::exists(file, ec)) {
        try {
            auto kernel = load_kernel(file);
            if (kernel.rep == rep && kernel.theta == theta) {
                last_ = std::make_shared<const RotationKernel>(std::move(kernel));
                return last_;
            }
            std::cerr << "warning: cache entry " << file.string()
                      << " does not match the requested kernel; rebuilding\n";
        } catch (const Error& e) {
            std::cerr << "warning: unreadable kernel cache " << file.string() << " (" << e.what()
                      << "); rebuilding\n";
        }
    }

    const WavefunctionTable table(rep);
    auto kernel = std::make_shared<const RotationKernel>(
        build_kernel_cartesian(rep, theta, table, threads_));
    std::filesystem::create_directories(dir_, ec);
    try {
        save_kernel(*kernel, file);
    } catch (const Error& e) {
        std::cerr << "warning: could not write kernel cache " << file.string() << " (" << e.what()
                  << ")\n";
    }
    last_ = kernel;
    return last_;
}

MonoImage rotate_mono(const MonoImage& image, const RotationKernel& kernel, unsigned threads) {
    return apply_kernel(kernel, image, threads);
}

MonoImage rotate_mono(const MonoImage& image, double theta, KernelProvider& kernels,
                      unsigned threads) {
    const auto kernel = kernels.get(image.rep(), theta);
    return apply_kernel(*kernel, image, threads);
}

RgbImage rotate_rgb(const RgbImage& image, double theta, KernelProvider& kernels,
                    unsigned threads) {
    const auto kernel = kernels.get(image.rep(), theta);
    return RgbImage(apply_kernel(*kernel, image.r(), threads),
                    apply_kernel(*kernel, image.g(), threads),
                    apply_kernel(*kernel, image.b(), threads));
}

}  // namespace finrot
