#pragma once
#include <stdexcept>
#include <string>

namespace tfe {

// Every error raised by the engine derives from Error so callers (CLI, service)
// can map them to exit codes / HTTP statuses by kind().
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define TFE_DEFINE_ERROR(Name)                                                 \
    struct Name : Error {                                                      \
        explicit Name(const std::string& what) : Error(#Name, what) {}         \
    }

// model-io
TFE_DEFINE_ERROR(MissingColumn);
TFE_DEFINE_ERROR(BadEnum);
TFE_DEFINE_ERROR(NonPositiveAge);
TFE_DEFINE_ERROR(BadValue);
TFE_DEFINE_ERROR(MissingCoefficient);
TFE_DEFINE_ERROR(NegativeVariance);
TFE_DEFINE_ERROR(BadUnits);
TFE_DEFINE_ERROR(ConflictingDirectives);
TFE_DEFINE_ERROR(BadWeight);
TFE_DEFINE_ERROR(UnknownClub);
// predictors / objective
TFE_DEFINE_ERROR(MissingFeature);
TFE_DEFINE_ERROR(UnpricedPlayer);
TFE_DEFINE_ERROR(MissingForecast);
TFE_DEFINE_ERROR(MissingAnnotation);
// numerics
TFE_DEFINE_ERROR(OutOfDomain);
TFE_DEFINE_ERROR(EmptySum);
TFE_DEFINE_ERROR(NoConvergence);
TFE_DEFINE_ERROR(NonFiniteResidual);
// solvers
TFE_DEFINE_ERROR(InfeasibleAfterFiltering);
TFE_DEFINE_ERROR(PoolTooLarge);
// auction / simulation
TFE_DEFINE_ERROR(OutOfWindow);
TFE_DEFINE_ERROR(NoFeasibleGap);
TFE_DEFINE_ERROR(NonMonotoneSolution);
TFE_DEFINE_ERROR(EmptyLookup);
TFE_DEFINE_ERROR(BadSetup);

#undef TFE_DEFINE_ERROR

} // namespace tfe
