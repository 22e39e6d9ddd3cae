#pragma once

#include <stdexcept>
#include <string>

namespace carom {

// Every recoverable failure mode raised by the library has its own type so
// callers can discriminate without string matching.  All of them derive from
// Error, which derives from std::runtime_error.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define CAROM_DEFINE_ERROR(NAME)                                \
  class NAME : public Error {                                   \
   public:                                                      \
    explicit NAME(const std::string& what) : Error(what) {}     \
  }

// Geometry and parametrization.
CAROM_DEFINE_ERROR(VertexParamError);      // parameter lands on a polygon vertex
CAROM_DEFINE_ERROR(TangentialRayError);    // launch/landing tangent to the boundary
CAROM_DEFINE_ERROR(NoReturnError);         // arc never re-intersects the boundary
CAROM_DEFINE_ERROR(GeometryError);         // invalid geometric data or no intersection
CAROM_DEFINE_ERROR(ModelError);            // point outside the model domain

// Billiard maps.
CAROM_DEFINE_ERROR(ReflectionUndefinedError);  // no admissible successor state
CAROM_DEFINE_ERROR(FieldDegenerateError);      // transverse field (near-)tangent
CAROM_DEFINE_ERROR(DomainError);               // input outside the map's domain
CAROM_DEFINE_ERROR(TieBreakError);             // non-unique support tangency
CAROM_DEFINE_ERROR(InvalidMassesError);        // mass triple fails the validity condition

// Tilings.
CAROM_DEFINE_ERROR(VertexHitError);        // refraction path hits a tile vertex
CAROM_DEFINE_ERROR(WindowExhaustedError);  // requested face outside the materialized window
CAROM_DEFINE_ERROR(PathError);             // edge path inconsistent with the tiling
CAROM_DEFINE_ERROR(BudgetExceededError);   // enumeration/search budget exhausted
CAROM_DEFINE_ERROR(NotAlternatingError);   // odd vertex valence; no alternating angle sum

// Variational search.
CAROM_DEFINE_ERROR(DegenerateChordError);  // consecutive orbit points coincide
CAROM_DEFINE_ERROR(NoConvergenceError);    // iteration failed to converge
CAROM_DEFINE_ERROR(NotPrimitiveError);     // orbit collapsed to a shorter period
CAROM_DEFINE_ERROR(InsufficientDataError); // not enough samples for an estimate

// Flows.
CAROM_DEFINE_ERROR(StiffnessError);        // adaptive step size underflow
CAROM_DEFINE_ERROR(ImplicitSingularError); // implicit velocity system (near-)singular
CAROM_DEFINE_ERROR(ShapeError);            // dimension mismatch

// Analysis and IO.
CAROM_DEFINE_ERROR(LabelAmbiguousError);   // reflection exactly on a label boundary
CAROM_DEFINE_ERROR(BoundaryStateError);    // line chart state too close to tangency
CAROM_DEFINE_ERROR(ConfigError);           // config parse/validation failure
CAROM_DEFINE_ERROR(SerializationError);    // non-finite value in serialized output

#undef CAROM_DEFINE_ERROR

}  // namespace carom
