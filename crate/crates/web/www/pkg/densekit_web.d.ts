/* tslint:disable */
/* eslint-disable */

/**
 * Per-epoch RMSE and the final prediction matrix for a planted-model run.
 */
export class PlantedRun {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly n_items: number;
    readonly n_users: number;
    /**
     * 1 where the cell was part of the training set.
     */
    readonly observed: Uint8Array;
    readonly prediction: Float64Array;
    /**
     * Training RMSE after each epoch.
     */
    readonly rmse: Float64Array;
    /**
     * Noiseless planted ratings, users × items row-major.
     */
    readonly truth: Float64Array;
}

/**
 * Training samples plus the fitted curve on a dense grid.
 */
export class SineFit {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly grid_pred: Float64Array;
    readonly grid_truth: Float64Array;
    readonly grid_x: Float64Array;
    /**
     * Max |prediction − sin(2πx)| over the grid.
     */
    readonly max_abs_error: number;
    readonly train_x: Float64Array;
    readonly train_y: Float64Array;
}

export function fit_sine(lambda: number, sigma: number, n_train: number, noise: number, seed: number, n_grid: number): SineFit;

export function kernel_heatmap(sigma: number, n: number): Float64Array;

export function train_planted(n_users: number, n_items: number, rank: number, density: number, n_factors: number, lr: number, reg: number, n_epochs: number, seed: number): PlantedRun;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_plantedrun_free: (a: number, b: number) => void;
    readonly __wbg_sinefit_free: (a: number, b: number) => void;
    readonly fit_sine: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly kernel_heatmap: (a: number, b: number) => [number, number, number, number];
    readonly plantedrun_n_items: (a: number) => number;
    readonly plantedrun_n_users: (a: number) => number;
    readonly plantedrun_observed: (a: number) => [number, number];
    readonly plantedrun_prediction: (a: number) => [number, number];
    readonly plantedrun_rmse: (a: number) => [number, number];
    readonly plantedrun_truth: (a: number) => [number, number];
    readonly sinefit_grid_pred: (a: number) => [number, number];
    readonly sinefit_grid_truth: (a: number) => [number, number];
    readonly sinefit_grid_x: (a: number) => [number, number];
    readonly sinefit_max_abs_error: (a: number) => number;
    readonly sinefit_train_x: (a: number) => [number, number];
    readonly sinefit_train_y: (a: number) => [number, number];
    readonly train_planted: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
