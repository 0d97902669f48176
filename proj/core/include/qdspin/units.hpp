#pragma once

#include <cmath>
#include <stdexcept>

// Unit-safe quantities for the whole toolkit. One canonical unit per
// dimension: ueV, ps, ps^-1, rad/ps, kV/cm, W/um^2, V. Mixing dimensions is
// a compile error; negative magnitudes are rejected at construction for
// rates, times and intensities.

namespace qdspin {

/// Reduced Planck constant in ueV*ps.
inline constexpr double kHbarUevPs = 658.2119569;

namespace detail {

template <class Derived>
class Quantity {
 public:
  /// Magnitude in the canonical unit of the derived type.
  constexpr double raw() const { return value_; }

  friend constexpr Derived operator+(Derived a, Derived b) {
    return Derived{a.value_ + b.value_};
  }
  friend constexpr Derived operator-(Derived a, Derived b) {
    return Derived{a.value_ - b.value_};
  }
  friend constexpr Derived operator-(Derived a) { return Derived{-a.value_}; }
  friend constexpr Derived operator*(Derived a, double s) {
    return Derived{a.value_ * s};
  }
  friend constexpr Derived operator*(double s, Derived a) {
    return Derived{s * a.value_};
  }
  friend constexpr Derived operator/(Derived a, double s) {
    return Derived{a.value_ / s};
  }
  /// Ratio of two like quantities is dimensionless.
  friend constexpr double operator/(Derived a, Derived b) {
    return a.value_ / b.value_;
  }
  friend constexpr auto operator<=>(Derived a, Derived b) {
    return a.value_ <=> b.value_;
  }
  friend constexpr bool operator==(Derived a, Derived b) {
    return a.value_ == b.value_;
  }

 protected:
  constexpr explicit Quantity(double v) : value_(v) {}
  double value_ = 0.0;
};

inline double require_non_negative(double v, const char* what) {
  if (!(v >= 0.0)) {
    throw std::invalid_argument(std::string(what) +
                                " must be non-negative and finite");
  }
  return v;
}

}  // namespace detail

/// Energy, canonical unit ueV. May be negative (detunings, shifts).
class Energy : public detail::Quantity<Energy> {
 public:
  constexpr Energy() : Quantity(0.0) {}
  static constexpr Energy micro_ev(double v) { return Energy{v}; }
  static constexpr Energy milli_ev(double v) { return Energy{v * 1e3}; }
  constexpr double micro_ev() const { return value_; }
  constexpr double milli_ev() const { return value_ * 1e-3; }

 private:
  constexpr explicit Energy(double v) : Quantity(v) {}
  friend class detail::Quantity<Energy>;
};

/// Angular frequency, canonical unit rad/ps.
class AngularFrequency : public detail::Quantity<AngularFrequency> {
 public:
  constexpr AngularFrequency() : Quantity(0.0) {}
  static constexpr AngularFrequency rad_per_ps(double v) {
    return AngularFrequency{v};
  }
  constexpr double rad_per_ps() const { return value_; }

 private:
  constexpr explicit AngularFrequency(double v) : Quantity(v) {}
  friend class detail::Quantity<AngularFrequency>;
};

/// Decay/tunneling rate, canonical unit ps^-1. Non-negative.
class Rate : public detail::Quantity<Rate> {
 public:
  constexpr Rate() : Quantity(0.0) {}
  static Rate per_ps(double v) {
    return Rate{detail::require_non_negative(v, "Rate")};
  }
  constexpr double per_ps() const { return value_; }

 private:
  constexpr explicit Rate(double v) : Quantity(v) {}
  friend class detail::Quantity<Rate>;
};

/// Time interval, canonical unit ps. Non-negative.
class Time : public detail::Quantity<Time> {
 public:
  constexpr Time() : Quantity(0.0) {}
  static Time ps(double v) {
    return Time{detail::require_non_negative(v, "Time")};
  }
  static Time ns(double v) {
    return Time{detail::require_non_negative(v, "Time") * 1e3};
  }
  constexpr double ps() const { return value_; }
  constexpr double ns() const { return value_ * 1e-3; }

 private:
  constexpr explicit Time(double v) : Quantity(v) {}
  friend class detail::Quantity<Time>;
};

/// DC electric field, canonical unit kV/cm. Sign allowed; callers may reject.
class Field : public detail::Quantity<Field> {
 public:
  constexpr Field() : Quantity(0.0) {}
  static constexpr Field kv_per_cm(double v) { return Field{v}; }
  constexpr double kv_per_cm() const { return value_; }

 private:
  constexpr explicit Field(double v) : Quantity(v) {}
  friend class detail::Quantity<Field>;
};

/// Optical intensity, canonical unit W/um^2. Non-negative.
/// 1 kW/cm^2 == 1e-5 W/um^2.
class Intensity : public detail::Quantity<Intensity> {
 public:
  constexpr Intensity() : Quantity(0.0) {}
  static Intensity w_per_um2(double v) {
    return Intensity{detail::require_non_negative(v, "Intensity")};
  }
  static Intensity kw_per_cm2(double v) {
    return Intensity{detail::require_non_negative(v, "Intensity") * 1e-5};
  }
  constexpr double w_per_um2() const { return value_; }
  constexpr double kw_per_cm2() const { return value_ * 1e5; }

 private:
  constexpr explicit Intensity(double v) : Quantity(v) {}
  friend class detail::Quantity<Intensity>;
};

/// Applied bias, canonical unit V.
class Voltage : public detail::Quantity<Voltage> {
 public:
  constexpr Voltage() : Quantity(0.0) {}
  static constexpr Voltage volts(double v) { return Voltage{v}; }
  constexpr double volts() const { return value_; }

 private:
  constexpr explicit Voltage(double v) : Quantity(v) {}
  friend class detail::Quantity<Voltage>;
};

/// n-i-Schottky diode geometry for the bias -> field map.
struct DiodeGeometry {
  double v_bi_volts = 0.76;  ///< built-in voltage
  double w_i_nm = 230.0;     ///< intrinsic-region width

  void validate() const {
    if (!(w_i_nm > 0.0)) {
      throw std::invalid_argument("DiodeGeometry: w_i must be > 0");
    }
  }
};

/// omega = E / hbar.
inline constexpr AngularFrequency energy_to_omega(Energy e) {
  return AngularFrequency::rad_per_ps(e.micro_ev() / kHbarUevPs);
}

/// E = hbar * omega.
inline constexpr Energy omega_to_energy(AngularFrequency w) {
  return Energy::micro_ev(w.rad_per_ps() * kHbarUevPs);
}

/// E = (V + V_bi) / W_i, expressed in kV/cm. 1 V/nm = 1e4 kV/cm.
inline Field bias_to_field(Voltage v, const DiodeGeometry& geom = {}) {
  geom.validate();
  return Field::kv_per_cm((v.volts() + geom.v_bi_volts) / geom.w_i_nm * 1e4);
}

/// Inverse of bias_to_field.
inline Voltage field_to_bias(Field e, const DiodeGeometry& geom = {}) {
  geom.validate();
  return Voltage::volts(e.kv_per_cm() / 1e4 * geom.w_i_nm - geom.v_bi_volts);
}

}  // namespace qdspin
