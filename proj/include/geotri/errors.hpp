#pragma once

#include <stdexcept>
#include <string>

namespace geotri {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define GEOTRI_ERROR(Name)                                        \
  struct Name : Error {                                           \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

GEOTRI_ERROR(NonManifold);
GEOTRI_ERROR(TriangleInequalityViolation);
GEOTRI_ERROR(Disconnected);
GEOTRI_ERROR(PointOnCurve);
GEOTRI_ERROR(NotAFiniteGraph);
GEOTRI_ERROR(NotADisk);
GEOTRI_ERROR(NotContained);
GEOTRI_ERROR(BigonVertexCase);
GEOTRI_ERROR(EnumerationCapExceeded);
GEOTRI_ERROR(StraighteningDiverged);
GEOTRI_ERROR(Condition1Failed);
GEOTRI_ERROR(Condition2Failed);
GEOTRI_ERROR(Condition3Failed);
GEOTRI_ERROR(GeodesicEndpointInside);
GEOTRI_ERROR(SamplingTooCoarse);
GEOTRI_ERROR(EnlargementDiverged);
GEOTRI_ERROR(BigonSplitDiverged);
GEOTRI_ERROR(ParseError);
GEOTRI_ERROR(StageFailure);

#undef GEOTRI_ERROR

} // namespace geotri
