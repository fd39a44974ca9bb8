#pragma once

#include <stdexcept>
#include <string>

namespace pmaplab {

// Base for every error raised by the library; name() is the stable tag.
class Error : public std::runtime_error {
public:
    Error(std::string tag, const std::string& what)
        : std::runtime_error(tag + ": " + what), tag_(std::move(tag)) {}
    const std::string& name() const { return tag_; }

private:
    std::string tag_;
};

#define PMAPLAB_ERROR(Name)                                                   \
    struct Name : Error {                                                     \
        explicit Name(const std::string& what = "") : Error(#Name, what) {}   \
    }

PMAPLAB_ERROR(InvalidField);
PMAPLAB_ERROR(DegenerateEquation);
PMAPLAB_ERROR(ZeroOffDiagonal);
PMAPLAB_ERROR(NotACut);
PMAPLAB_ERROR(PartitionMismatch);
PMAPLAB_ERROR(SeedNotSatisfying);
PMAPLAB_ERROR(FieldTooSmall);
PMAPLAB_ERROR(SingularShift);
PMAPLAB_ERROR(NoRoot);
PMAPLAB_ERROR(TooLarge);
PMAPLAB_ERROR(NoRemovableIndex);
PMAPLAB_ERROR(NoCandidateAccepted);
PMAPLAB_ERROR(ZeroCouplingEntry);
PMAPLAB_ERROR(TransitivityViolation);
PMAPLAB_ERROR(RetriesExhausted);
PMAPLAB_ERROR(SingularAlways);
PMAPLAB_ERROR(SingularAssembly);
PMAPLAB_ERROR(IsolationFailed);
PMAPLAB_ERROR(NotPmapShaped);
PMAPLAB_ERROR(FormatError);

#undef PMAPLAB_ERROR

} // namespace pmaplab
