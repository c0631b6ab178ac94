/**
 * Configuration documents and named presets.
 *
 * These are plain JSON documents in the same schema the backing tool's
 * `--config` flag accepts; unknown keys and out-of-range values are
 * rejected on the backing side, so there is exactly one validator.
 */

export type ShapeName = "rhombus" | "ellipse";
export type InterpName = "nearest" | "bilinear";

/** Feature-space policy: mini-batch gate probability and offset scale. */
export interface FeatureConfigDoc {
  p_f?: number;
  gamma?: number;
  per?: "batch";
}

/** Image-space policy plus an optional nested feature-space policy. */
export interface LomaConfigDoc {
  p?: number;
  shape?: ShapeName;
  r_min?: number;
  r_max?: number;
  a_min?: number;
  a_max?: number;
  interp?: InterpName;
  feature?: FeatureConfigDoc;
}

/** A document with every field filled in. */
export type ResolvedConfigDoc = Required<Omit<LomaConfigDoc, "feature">> & {
  feature: Required<FeatureConfigDoc>;
};

function frozen(doc: ResolvedConfigDoc): ResolvedConfigDoc {
  Object.freeze(doc.feature);
  return Object.freeze(doc);
}

export const DEFAULT_CONFIG: ResolvedConfigDoc = frozen({
  p: 0.5,
  shape: "rhombus",
  r_min: 0.03,
  r_max: 0.7,
  a_min: 1.0,
  a_max: 3.0,
  interp: "bilinear",
  feature: { p_f: 0.5, gamma: 0.25, per: "batch" },
});

export type PresetName = "cifar" | "imagenet" | "detection";

/** Named presets, identical to the backing tool's `--preset` table. */
export const PRESETS: Record<PresetName, ResolvedConfigDoc> = {
  cifar: DEFAULT_CONFIG,
  imagenet: frozen({ ...DEFAULT_CONFIG, p: 0.8, feature: { ...DEFAULT_CONFIG.feature } }),
  detection: frozen({
    ...DEFAULT_CONFIG,
    p: 0.25,
    r_max: 0.5,
    a_max: 1.0,
    feature: { ...DEFAULT_CONFIG.feature },
  }),
};

/** Return a fresh document for a named preset. */
export function preset(name: PresetName): ResolvedConfigDoc {
  const doc = PRESETS[name];
  if (doc === undefined) {
    throw new TypeError(`unknown preset ${JSON.stringify(name)}; expected one of ${Object.keys(PRESETS).join(", ")}`);
  }
  return { ...doc, feature: { ...doc.feature } };
}

/** Fill defaults into a partial document without touching the input. */
export function resolveConfig(doc?: LomaConfigDoc): ResolvedConfigDoc {
  const { feature, ...top } = doc ?? {};
  return {
    ...DEFAULT_CONFIG,
    ...top,
    feature: { ...DEFAULT_CONFIG.feature, ...(feature ?? {}) },
  };
}
