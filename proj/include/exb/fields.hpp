#ifndef EXB_FIELDS_HPP
#define EXB_FIELDS_HPP

#include <memory>

#include "exb/control.hpp"
#include "exb/potential.hpp"

namespace exb {

/// A drive field for the guiding-center flow dx/dt = -dH/dy, dy/dt = dH/dx.
/// Implementations are immutable and safe for concurrent sampling.
class FieldModel {
 public:
  virtual ~FieldModel() = default;
  virtual FieldSample sample(double x, double y, double t) const = 0;
  double value(double x, double y, double t) const {
    return sample(x, y, t).value;
  }
};

/// The uncontrolled potential V.
class PlainField final : public FieldModel {
 public:
  explicit PlainField(PotentialSpec spec) : spec_(std::move(spec)) {}
  FieldSample sample(double x, double y, double t) const override {
    return spec_.sample(x, y, t);
  }
  const PotentialSpec& spec() const { return spec_; }

 private:
  PotentialSpec spec_;
};

/// V + scale * (V(x + f') - V): the exactly controlled potential at scale 1.
class ExactControlledField final : public FieldModel {
 public:
  ExactControlledField(PotentialSpec spec, double x0, double control_scale = 1.0);
  FieldSample sample(double x, double y, double t) const override;
  const BarrierGeometry& geometry() const { return geom_; }

 private:
  BarrierGeometry geom_;
  double scale_;
};

/// V + scale * (Vtr - V) with Vtr the harmonics-limited controlled potential.
/// Gradients are analytic (chain rule through F_c, F_s, rho, Theta, eta).
class TruncatedControlledField final : public FieldModel {
 public:
  TruncatedControlledField(PotentialSpec spec, double x0, int harmonics = 2,
                           double control_scale = 1.0);
  FieldSample sample(double x, double y, double t) const override;

 private:
  BarrierGeometry geom_;
  int harmonics_;
  double scale_;
};

std::unique_ptr<FieldModel> make_field(const PotentialSpec& spec,
                                       const ControlConfig& config);

/// One-call convenience mirroring make_field(...)->sample(...).
FieldSample control_field_sample(const PotentialSpec& spec,
                                 const ControlConfig& config, double x, double y,
                                 double t);

}  // namespace exb

#endif
