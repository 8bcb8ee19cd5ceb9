#pragma once

#include <string_view>

// Trait identifiers follow the semiotic taxonomy numbering; a suffix
// separates several traits filed under one taxonomy row.
namespace fresco::measure {

// Image scope.
inline constexpr std::string_view kMedium = "0.1";
inline constexpr std::string_view kPalette = "1.2.1-palette";
inline constexpr std::string_view kGrayscale = "1.2.1-grayscale";
inline constexpr std::string_view kHistogram = "1.2.1-histogram";
inline constexpr std::string_view kBrightness = "1.2.2";
inline constexpr std::string_view kSaturation = "1.2.3";
inline constexpr std::string_view kBackgroundDepth = "1.3.4-background";
inline constexpr std::string_view kCoverage = "1.3.5";
inline constexpr std::string_view kTags = "2.1.1";
inline constexpr std::string_view kPeopleCount = "2.2.1.1";
inline constexpr std::string_view kGroupSize = "2.2.1.1-group";
inline constexpr std::string_view kObjectCount = "2.2.3.2-count";
inline constexpr std::string_view kSceneClass = "2.2.4.1";
inline constexpr std::string_view kIndoorOutdoor = "2.2.4.3";
inline constexpr std::string_view kManmadeNatural = "2.2.4.4";
inline constexpr std::string_view kCaption = "2.4.1";
inline constexpr std::string_view kSubjectDistance = "3.1.1";
inline constexpr std::string_view kCharacterDistance = "3.1.2";
inline constexpr std::string_view kViewerIndoorOutdoor = "3.1.3-indoor_outdoor";
inline constexpr std::string_view kFraming = "3.1.3-framing";
inline constexpr std::string_view kFaceRatio = "3.1.3-ratio";

// Object instances.
inline constexpr std::string_view kVerticalRatio = "1.3.1";
inline constexpr std::string_view kVerticalBand = "1.3.1-band";
inline constexpr std::string_view kHorizontalRatio = "1.3.2";
inline constexpr std::string_view kHorizontalBand = "1.3.2-band";
inline constexpr std::string_view kCentrality = "1.3.3";
inline constexpr std::string_view kCentralityClass = "1.3.3-class";
inline constexpr std::string_view kInstanceDepth = "1.3.4";
inline constexpr std::string_view kObjectCategory = "2.2.3.2";
inline constexpr std::string_view kOcrText = "2.2.3.3";

// Face instances.
inline constexpr std::string_view kAge = "2.2.2.2";
inline constexpr std::string_view kGender = "2.2.2.3";
inline constexpr std::string_view kEthnicity = "2.2.2.5";
inline constexpr std::string_view kFaceAttributes = "2.2.2.15";
inline constexpr std::string_view kArousal = "2.5.1";
inline constexpr std::string_view kEmotion = "2.5.2";
inline constexpr std::string_view kValence = "2.5.3";
inline constexpr std::string_view kHeadYaw = "3.2.1-yaw";
inline constexpr std::string_view kHeadPitch = "3.2.1-pitch";
inline constexpr std::string_view kHeadRoll = "3.2.1-roll";
inline constexpr std::string_view kGazeYaw = "3.2.3-yaw";
inline constexpr std::string_view kGazePitch = "3.2.3-pitch";

}  // namespace fresco::measure
