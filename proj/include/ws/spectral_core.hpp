#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ws {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

/** Periodic n^3 lattice on [-L/2, L/2)^3 and its Fourier dual. */
class SpectralGrid {
 public:
  static std::shared_ptr<const SpectralGrid> make(int n, double L);
  ~SpectralGrid();
  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;

  int n() const { return n_; }
  double L() const { return L_; }
  std::size_t size() const { return N_; }
  double dx() const { return L_ / n_; }
  double dk() const { return 2.0 * 3.14159265358979323846 / L_; }
  double cell_volume() const { return dx() * dx() * dx(); }
  double x(int j) const { return -0.5 * L_ + j * dx(); }
  /// signed mode number of array index j, in [-n/2, n/2)
  int mode(int j) const { return j < n_ / 2 ? j : j - n_; }
  double k(int j) const { return dk() * mode(j); }
  std::size_t flat(int i, int j, int l) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + l;
  }
  const std::vector<double>& k2() const { return k2_; }
  const std::vector<double>& kabs() const { return kabs_; }
  const std::vector<unsigned char>& dealias_mask() const { return mask_; }
  /// (-1)^(m1+m2+m3): converts raw FFT coefficients to centred-box transforms
  const std::vector<double>& parity() const { return parity_; }

  void forward(cplx* data) const;   // unnormalised
  void backward(cplx* data) const;  // scaled by 1/N
  /// ||f||_2^2 = parseval() * sum |F_m|^2 for raw FFT coefficients F
  double parseval() const { return cell_volume() / static_cast<double>(N_); }

 private:
  SpectralGrid(int n, double L);
  int n_;
  double L_;
  std::size_t N_;
  std::vector<double> k2_, kabs_, parity_;
  std::vector<unsigned char> mask_;
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

enum class Frame { physical, bframe };

struct ScalarField {
  GridPtr grid;
  CVec v;
  Frame frame = Frame::bframe;
  double t = 1.0;

  ScalarField() = default;
  explicit ScalarField(GridPtr g, Frame f = Frame::bframe, double time = 1.0);
  static ScalarField from_function(GridPtr g, const std::function<cplx(double, double, double)>& fn,
                                   Frame f = Frame::bframe, double time = 1.0);

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(cplx a);
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(cplx a, ScalarField b);

struct VectorField {
  std::array<ScalarField, 3> c;
  VectorField() = default;
  explicit VectorField(GridPtr g, Frame f = Frame::bframe, double time = 1.0);
  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(cplx a);
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(cplx a, VectorField b);

/// Symbol xi -> m(xi); zero_value is used at xi = 0 when given.
struct MultiplierSymbol {
  std::string name;
  std::function<cplx(double, double, double)> symbol;
  std::optional<cplx> zero_value;
};

CVec to_spectrum(const ScalarField& f);
ScalarField from_spectrum(GridPtr g, CVec spec, Frame f = Frame::bframe, double time = 1.0);

ScalarField apply_multiplier(const ScalarField& f, const MultiplierSymbol& m);
void apply_radial(CVec& spec, const SpectralGrid& g, const std::function<cplx(double)>& m);

enum class ZeroMode { require_negligible, annihilated };
ScalarField omega_power(const ScalarField& f, double s, ZeroMode zm = ZeroMode::require_negligible);

VectorField grad(const ScalarField& f);
ScalarField div(const VectorField& v);
VectorField curl(const VectorField& v);
ScalarField laplacian(const ScalarField& f);

enum class DilationMethod { spline, spectral };
/// out(x) = f(x / nu), nu >= 1
ScalarField dilate(const ScalarField& f, double nu, DilationMethod m = DilationMethod::spline);
/// spline dilation starting from raw FFT coefficients; writes x-space samples to out
void dilate_spectrum(const SpectralGrid& g, const CVec& spec, double nu, CVec& out);
/// lattice transform of f at the wavenumbers s k, in to_spectrum units. A smooth per-axis window
/// takes |s k| from 2/3 of the Nyquist frequency down to zero at Nyquist, so the result is smooth in s.
CVec scaled_spectrum(const ScalarField& f, double s);
/// trigonometric interpolation onto a finer lattice with the same box (zero padding; Nyquist mode dropped)
ScalarField upsample(const ScalarField& f, const GridPtr& fine);

ScalarField schrodinger_group(const ScalarField& f, double tau);
ScalarField mdfm_apply(const ScalarField& f, double t);

enum class SobolevVariant { inhomogeneous, homogeneous };
double sobolev_norm(const ScalarField& f, double k, SobolevVariant v = SobolevVariant::inhomogeneous);
double sobolev_norm_spec(const SpectralGrid& g, const CVec& spec, double k, SobolevVariant v);
double lr_norm(const ScalarField& f, double r);
double l2_norm(const ScalarField& f);
double linf_norm(const ScalarField& f);
double l2_norm(const VectorField& v);
double galilei_norm(const ScalarField& g, double k);

void dealias_spectrum(CVec& spec, const SpectralGrid& g);
ScalarField dealias(const ScalarField& f);
/// dealiased pointwise product
ScalarField product(const ScalarField& a, const ScalarField& b);
ScalarField dot(const VectorField& a, const VectorField& b);
/// (a . grad) b, dealiased
VectorField advect(const VectorField& a, const VectorField& b);

/// max |Im f| / ||f||_inf (0 for the zero field)
double imag_ratio(const ScalarField& f);
ScalarField real_part(const ScalarField& f);

}  // namespace ws
