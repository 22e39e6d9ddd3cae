#pragma once

#include <string>
#include <vector>

#include "carom/config.hpp"

namespace carom {

struct ExperimentResult {
  int exit_code = 0;                // 0 on success, 1 when an error was recorded
  std::string summary_path;         // always written
  std::vector<std::string> files;   // every artifact written, summary first
  std::string error;                // empty on success
};

// Runs the configured experiment and writes its artifacts under out_dir
// (created if missing).  Every output is a CSV built deterministically from
// the config's seed: the same config produces byte-identical files on every
// run and for every thread count.  Errors raised by the underlying modules
// are caught, serialized into summary.csv, and reported via exit_code 1.
//
// Artifacts per kind (summary.csv always; key,value layout):
//   orbit-sweep     sweep.csv (orbit,step,s,phi | orbit,step,s0,s1),
//                   rotation.csv (orbit,rotation,half-width,converged)
//   periodic-search orbits.csv (orbit,bounces,winding,length,grad-norm,
//                   morse-index,primitive), orbit_points.csv (orbit,vertex,s,x,y)
//   count-PT        counts.csv (T,P)
//   tiling-sim      trajectories.csv (start,classification,steps,period,
//                   drift-i,drift-j,face-revisit-step)
//   fold-scan       folds.csv (entry,kind,q00,q01,q10,q11,tx,ty)
//   flow            flow.csv (t,x,p,energy,factor,one-form-pairing[,area-defect])
//   strobe          strobe.csv (k,u,p)
//   complexity      complexity.csv (n,p)
//   front           front.csv (piece,vertex,x,y,reflections),
//                   density.csv (time,covered)
//   line-domain     domain.csv (theta,p-lo,p-hi),
//                   jacobians.csv (state,theta,p,det)
ExperimentResult run_experiment(const ExperimentConfig& config, const std::string& out_dir);

}  // namespace carom
