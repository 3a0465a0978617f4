/*
 * Copyright 2026 The Latent Debate Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace latent_debate {

// Root of every error raised by the library. Callers that only need to
// report a failure can catch this; the subclasses name the violated contract.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// qbaf-core
class CycleError : public Error { using Error::Error; };
class DuplicateIdError : public Error { using Error::Error; };
class DuplicateLinkError : public Error { using Error::Error; };
class RangeError : public Error { using Error::Error; };
class MissingParentStrength : public Error { using Error::Error; };
class UnknownArgumentError : public Error { using Error::Error; };

// debate-graph
class SchemaError : public Error { using Error::Error; };
class ShapeError : public Error { using Error::Error; };

// surrogates / features
class LengthMismatch : public Error { using Error::Error; };
class EmptyInput : public Error { using Error::Error; };
class TooFewLayers : public Error { using Error::Error; };
class EmptyRegion : public Error { using Error::Error; };

// detector
class TooFewSamples : public Error { using Error::Error; };
class SingleClassError : public Error { using Error::Error; };
class DimensionError : public Error { using Error::Error; };
class TooManyFeatures : public Error { using Error::Error; };
class EmptyBackground : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };

// cli
class IoError : public Error { using Error::Error; };

}  // namespace latent_debate
