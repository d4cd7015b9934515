#pragma once

#include <stdexcept>
#include <string>

namespace tickcast {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define TICKCAST_ERROR(Name)                           \
    struct Name : Error {                              \
        using Error::Error;                            \
        Name() : Error(#Name) {}                       \
    }

TICKCAST_ERROR(InvalidConfig);

// lob
TICKCAST_ERROR(SeriesTooShort);
TICKCAST_ERROR(TooFewEvents);

// features
TICKCAST_ERROR(NumericOverflow);
TICKCAST_ERROR(RangeTooShort);

// forest
TICKCAST_ERROR(EmptyNode);
TICKCAST_ERROR(InvalidSplit);
TICKCAST_ERROR(DegenerateData);

// gd
TICKCAST_ERROR(Diverged);

// corr
TICKCAST_ERROR(DimensionMismatch);
TICKCAST_ERROR(TooFewRows);

// cluster
TICKCAST_ERROR(BadK);
TICKCAST_ERROR(TooFewClusters);
TICKCAST_ERROR(TooFewFeatures);

// rbfnn
TICKCAST_ERROR(SingleCentroid);
TICKCAST_ERROR(SingularSystem);

// engine
TICKCAST_ERROR(LengthMismatch);
TICKCAST_ERROR(EmptySpan);

// io
TICKCAST_ERROR(UnsortedTimestamps);
TICKCAST_ERROR(EmptyFile);
TICKCAST_ERROR(BadSpec);
TICKCAST_ERROR(IoError);

#undef TICKCAST_ERROR

// Carries the 1-based line number of the offending row.
struct ParseError : Error {
    std::size_t line;
    ParseError(std::size_t line_no, const std::string& what_arg)
        : Error("line " + std::to_string(line_no) + ": " + what_arg), line(line_no) {}
};

}  // namespace tickcast
