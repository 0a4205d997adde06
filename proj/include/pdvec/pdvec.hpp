#pragma once

// Persistence diagrams, their degree-0 computation on meshes, complex
// coefficient embeddings, distances and retrieval evaluation.

#include <pdvec/diagram.hpp>
#include <pdvec/error.hpp>
#include <pdvec/matching.hpp>
#include <pdvec/mesh.hpp>
#include <pdvec/metrics.hpp>
#include <pdvec/persistence.hpp>
#include <pdvec/retrieval.hpp>
#include <pdvec/synth.hpp>
#include <pdvec/transforms.hpp>
#include <pdvec/viete.hpp>
