#pragma once

// Tagged scalar quantities. Every value is stored in SI; non-SI factories
// (eV, angstrom, ...) convert once at the API boundary. Distinct types make
// cross-unit construction a compile error, which is the whole point.

namespace quasyn {

namespace unit {
// Exact by SI definition since the 2019 redefinition.
inline constexpr double electron_volt = 1.602176634e-19;  // J
inline constexpr double angstrom = 1e-10;                 // m
inline constexpr double nanometre = 1e-9;                 // m
}  // namespace unit

class Energy {
 public:
  static constexpr Energy joules(double v) { return Energy{v}; }
  static constexpr Energy electron_volts(double v) { return Energy{v * unit::electron_volt}; }
  static constexpr Energy milli_electron_volts(double v) { return Energy{v * 1e-3 * unit::electron_volt}; }
  constexpr double in_joules() const { return si_; }
  constexpr double in_electron_volts() const { return si_ / unit::electron_volt; }
  friend constexpr bool operator==(Energy, Energy) = default;

 private:
  explicit constexpr Energy(double v) : si_(v) {}
  double si_;
};

class Mass {
 public:
  static constexpr Mass kilograms(double v) { return Mass{v}; }
  constexpr double in_kilograms() const { return si_; }
  friend constexpr bool operator==(Mass, Mass) = default;

 private:
  explicit constexpr Mass(double v) : si_(v) {}
  double si_;
};

class Length {
 public:
  static constexpr Length metres(double v) { return Length{v}; }
  static constexpr Length angstroms(double v) { return Length{v * unit::angstrom}; }
  static constexpr Length nanometres(double v) { return Length{v * unit::nanometre}; }
  constexpr double in_metres() const { return si_; }
  constexpr double in_nanometres() const { return si_ / unit::nanometre; }
  friend constexpr bool operator==(Length, Length) = default;

 private:
  explicit constexpr Length(double v) : si_(v) {}
  double si_;
};

class Temperature {
 public:
  static constexpr Temperature kelvin(double v) { return Temperature{v}; }
  constexpr double in_kelvin() const { return si_; }
  friend constexpr bool operator==(Temperature, Temperature) = default;

 private:
  explicit constexpr Temperature(double v) : si_(v) {}
  double si_;
};

class AngularFrequency {
 public:
  static constexpr AngularFrequency radians_per_second(double v) { return AngularFrequency{v}; }
  constexpr double in_radians_per_second() const { return si_; }
  friend constexpr bool operator==(AngularFrequency, AngularFrequency) = default;

 private:
  explicit constexpr AngularFrequency(double v) : si_(v) {}
  double si_;
};

class Rate {
 public:
  static constexpr Rate per_second(double v) { return Rate{v}; }
  constexpr double in_per_second() const { return si_; }
  friend constexpr bool operator==(Rate, Rate) = default;

 private:
  explicit constexpr Rate(double v) : si_(v) {}
  double si_;
};

class Time {
 public:
  static constexpr Time seconds(double v) { return Time{v}; }
  constexpr double in_seconds() const { return si_; }
  friend constexpr bool operator==(Time, Time) = default;

 private:
  explicit constexpr Time(double v) : si_(v) {}
  double si_;
};

}  // namespace quasyn
