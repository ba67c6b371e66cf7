#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "finrot/image.hpp"
#include "finrot/oscillator.hpp"

namespace finrot {

/// Real unitary N^2 x N^2 rotation matrix for one (j, theta). Rows and
/// columns are indexed by the flattened pixel pair (i_x, i_y) -> i_x * N + i_y
/// (row-major, i_x major). Applying it to the flattened pixel vector rotates
/// the image; R(0) is the identity and R(-theta) = R(theta)^T.
struct RotationKernel {
    OscillatorRep rep;
    double theta;
    std::vector<double> matrix;  // dim() * dim(), row-major

    std::size_t dim() const { return static_cast<std::size_t>(rep.size()) * rep.size(); }
};

/// Default builder: the real-arithmetic mode-block sum. For each total mode
/// n the (2D-mode-space) block is the transpose of the little-d matrix of
/// order min(n, 4j-n)/2 evaluated at 2*theta; the pixel-space kernel is
/// assembled per output row through the separable wavefunction transform.
/// Work is O(N^5), parallel over output pixel rows, deterministic for any
/// thread count.
RotationKernel build_kernel_cartesian(OscillatorRep rep, double theta,
                                      const WavefunctionTable& table, unsigned threads = 0);

/// Cross-check builder: the complex sum of polar modes weighted by e^{-im
/// theta}. The imaginary part must cancel; its maximum residue is written to
/// *max_imag_residue when given, and a residue above 1e-6 throws
/// ConsistencyError (that magnitude signals a basis bug, not roundoff).
RotationKernel build_kernel_polar(OscillatorRep rep, double theta, const WavefunctionTable& table,
                                  unsigned threads = 0, double* max_imag_residue = nullptr);

/// out = R * image (flattened); data-image result. DomainError on size
/// mismatch.
MonoImage apply_kernel(const RotationKernel& kernel, const MonoImage& image,
                       unsigned threads = 0);

/// max-norm of R(theta1) R(theta2) - R(theta1 + theta2); the group-composition
/// residual used by the test suites. DomainError if the reps differ.
double compose_check(const RotationKernel& k1, const RotationKernel& k2, unsigned threads = 0);

/// FNV-1a 64-bit checksum of the kernel payload bytes (the N^4 doubles).
std::uint64_t kernel_payload_checksum(const RotationKernel& kernel);

/// Kernel cache file ("FINROT1" format): magic "FINROT1\0", then
/// little-endian u32 {2j, flattening flag (0 = i_x major)}, f64 theta, the
/// N^4 f64 payload row-major, and the u64 FNV-1a checksum of the payload.
/// Round trips are bit-exact. Loading a truncated, corrupt, or mislabeled
/// file throws FormatError and never returns a partial kernel.
void save_kernel(const RotationKernel& kernel, const std::filesystem::path& path);
RotationKernel load_kernel(const std::filesystem::path& path);

/// Source of kernels for the rotation pipelines: lets callers swap a direct
/// builder for a disk cache without touching image code.
class KernelProvider {
public:
    virtual ~KernelProvider() = default;
    virtual std::shared_ptr<const RotationKernel> get(OscillatorRep rep, double theta) = 0;
};

/// Builds kernels on demand; remembers the most recent one so the three
/// channels of an RGB rotation share a single build.
class DirectKernelProvider : public KernelProvider {
public:
    explicit DirectKernelProvider(unsigned threads = 0) : threads_(threads) {}
    std::shared_ptr<const RotationKernel> get(OscillatorRep rep, double theta) override;

private:
    unsigned threads_;
    std::mutex mutex_;
    std::shared_ptr<const RotationKernel> last_;
};

/// Disk-backed provider: kernels are looked up by (2j, theta-bits) in a cache
/// directory, rebuilt and rewritten when missing or unreadable. A corrupt
/// cache entry produces a warning line on stderr, never an error.
class CachingKernelProvider : public KernelProvider {
public:
    CachingKernelProvider(std::filesystem::path dir, unsigned threads = 0);
    std::shared_ptr<const RotationKernel> get(OscillatorRep rep, double theta) override;

    static std::filesystem::path cache_file_name(OscillatorRep rep, double theta);

private:
    std::filesystem::path dir_;
    unsigned threads_;
    std::mutex mutex_;
    std::shared_ptr<const RotationKernel> last_;
};

/// Rotation pipelines (data-image outputs; values may leave [0, 1]).
MonoImage rotate_mono(const MonoImage& image, const RotationKernel& kernel, unsigned threads = 0);
MonoImage rotate_mono(const MonoImage& image, double theta, KernelProvider& kernels,
                      unsigned threads = 0);
RgbImage rotate_rgb(const RgbImage& image, double theta, KernelProvider& kernels,
                    unsigned threads = 0);

}  // namespace finrot
