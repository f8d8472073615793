#pragma once

#include <string>

#include "minipic/vec3.hpp"

namespace pic {

enum class Population { sheet, background };

struct Species {
  int id = 0;
  std::string name;
  double qom = 0.0;            // charge-to-mass ratio, sign carries the charge sign
  double q_per_particle = 0.0; // macro-particle charge
  int ppc = 1;                 // particles per cell (background) / peak-density equivalent (sheet)
  Vec3 uth{};                  // thermal velocity per axis
  Vec3 u0{};                   // drift velocity
  Population population = Population::background;
};

}  // namespace pic
