/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_plantedrun_free: (a: number, b: number) => void;
export const __wbg_sinefit_free: (a: number, b: number) => void;
export const fit_sine: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const kernel_heatmap: (a: number, b: number) => [number, number, number, number];
export const plantedrun_n_items: (a: number) => number;
export const plantedrun_n_users: (a: number) => number;
export const plantedrun_observed: (a: number) => [number, number];
export const plantedrun_prediction: (a: number) => [number, number];
export const plantedrun_rmse: (a: number) => [number, number];
export const plantedrun_truth: (a: number) => [number, number];
export const sinefit_grid_pred: (a: number) => [number, number];
export const sinefit_grid_truth: (a: number) => [number, number];
export const sinefit_grid_x: (a: number) => [number, number];
export const sinefit_max_abs_error: (a: number) => number;
export const sinefit_train_x: (a: number) => [number, number];
export const sinefit_train_y: (a: number) => [number, number];
export const train_planted: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
