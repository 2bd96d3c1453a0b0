#pragma once

#include "iknap/vec2.hpp"

namespace iknap {

/// Double-integrator point body.
struct BodyState {
  Vec2 pos;  // m
  Vec2 vel;  // m/s
};

}  // namespace iknap
