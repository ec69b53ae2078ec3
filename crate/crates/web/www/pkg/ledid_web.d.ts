/* tslint:disable */
/* eslint-disable */

export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Room footprint as `[x_min, x_max, y_min, y_max]`, m.
     */
    extent(): Float64Array;
    /**
     * Gray levels of log10(BER) (0 = 1e-8 or better, 255 = 0.5), row-major
     * with the first row at `y_min`.
     */
    heatmap(tag: string, plane_cm: number, resolution: number): Uint8Array;
    name(): string;
    /**
     * `source` is `"l1"`, `"g1"` or the text of a scenario TOML document.
     */
    constructor(source: string);
    /**
     * Link budget for `tag` at `(x, y)` on the given plane, as `key=value` lines.
     */
    probe(tag: string, x: number, y: number, plane_cm: number): string;
    /**
     * Per-tag BER under each tag's lamps and the cone-overlap distance.
     */
    resolve(plane_cm: number, threshold: number): string;
    tags(): string[];
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly demo_extent: (a: number) => [number, number];
    readonly demo_heatmap: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly demo_name: (a: number) => [number, number];
    readonly demo_new: (a: number, b: number) => [number, number, number];
    readonly demo_probe: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly demo_resolve: (a: number, b: number, c: number) => [number, number, number, number];
    readonly demo_tags: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __externref_drop_slice: (a: number, b: number) => void;
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
