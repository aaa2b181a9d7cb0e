import type { InstanceDocument, ValueObject } from "./types.js";

export type Segment = { key: string; index: number | null };

export function parsePath(path: string): Segment[] {
  return path.split("/").map((raw) => {
    const match = /^([a-z][a-z0-9_]*)(?:\[(\d+)\])?$/.exec(raw);
    if (!match) throw new Error(`bad value path segment: ${raw}`);
    return { key: match[1], index: match[2] === undefined ? null : Number(match[2]) };
  });
}

/**
 * Client-side working state for one metadata record: a flat map of value
 * paths to JSON-LD value objects plus repetition counts for multi-valued
 * nodes. It assembles the outbound document mechanically; all validation and
 * canonical serialization happen on the service.
 */
export class WorkingDocument {
  private values = new Map<string, ValueObject | ValueObject[]>();
  private repCounts = new Map<string, number>();
  private repKinds = new Map<string, "element" | "field">();

  constructor(public templateId: string) {}

  setValue(path: string, value: ValueObject | ValueObject[] | null): void {
    if (value === null) {
      this.values.delete(path);
    } else {
      this.values.set(path, value);
    }
  }

  getValue(path: string): ValueObject | ValueObject[] | undefined {
    return this.values.get(path);
  }

  registerRepeat(base: string, kind: "element" | "field", count: number): void {
    this.repKinds.set(base, kind);
    if (!this.repCounts.has(base) || (this.repCounts.get(base) ?? 0) < count) {
      this.repCounts.set(base, count);
    }
  }

  repeatCount(base: string): number {
    return this.repCounts.get(base) ?? 0;
  }

  repeatKind(base: string): "element" | "field" {
    return this.repKinds.get(base) ?? "field";
  }

  addRepetition(base: string): number {
    const next = this.repeatCount(base) + 1;
    this.repCounts.set(base, next);
    return next;
  }

  /** Remove repetition `index`; values at higher indices shift down. */
  removeRepetition(base: string, index: number): void {
    const count = this.repeatCount(base);
    if (index >= count || count <= 0) return;
    const prefix = `${base}[`;
    const shift = (path: string): string | null => {
      if (!path.startsWith(prefix)) return path;
      const rest = path.slice(prefix.length);
      const closing = rest.indexOf("]");
      const repIndex = Number(rest.slice(0, closing));
      const tail = rest.slice(closing + 1);
      if (repIndex === index) return null;
      return repIndex > index ? `${base}[${repIndex - 1}]${tail}` : path;
    };
    const nextValues = new Map<string, ValueObject | ValueObject[]>();
    for (const [path, value] of this.values) {
      const moved = shift(path);
      if (moved !== null) nextValues.set(moved, value);
    }
    this.values = nextValues;
    const nextCounts = new Map<string, number>();
    const nextKinds = new Map<string, "element" | "field">();
    for (const [base2, count2] of this.repCounts) {
      const moved = shift(base2);
      if (moved !== null) {
        nextCounts.set(moved, count2);
        nextKinds.set(moved, this.repKinds.get(base2) ?? "field");
      }
    }
    this.repCounts = nextCounts;
    this.repKinds = nextKinds;
    this.repCounts.set(base, count - 1);
    this.repKinds.set(base, this.repKinds.get(base) ?? "element");
  }

  /**
   * Assemble the outbound JSON-LD document. Multi-valued elements pad empty
   * repetitions with {} so the service sees the same row count the form
   * shows; empty field repetitions compact away (they have no JSON-LD form).
   */
  toDocument(): InstanceDocument {
    const doc: Record<string, unknown> = { "@type": this.templateId };

    const container = (segments: Segment[]): Record<string, unknown> => {
      let node: Record<string, unknown> = doc;
      for (const segment of segments) {
        if (segment.index === null) {
          const existing = node[segment.key];
          if (typeof existing !== "object" || existing === null || Array.isArray(existing)) {
            node[segment.key] = {};
          }
          node = node[segment.key] as Record<string, unknown>;
        } else {
          if (!Array.isArray(node[segment.key])) node[segment.key] = [];
          const array = node[segment.key] as unknown[];
          while (array.length <= segment.index) array.push({});
          if (typeof array[segment.index] !== "object" || array[segment.index] === null) {
            array[segment.index] = {};
          }
          node = array[segment.index] as Record<string, unknown>;
        }
      }
      return node;
    };

    // element repetition rows first, so intentionally empty rows survive
    for (const [base, count] of this.repCounts) {
      if (this.repKinds.get(base) !== "element" || count <= 0) continue;
      const segments = parsePath(base);
      const parent = container(segments.slice(0, -1));
      const key = segments[segments.length - 1].key;
      if (!Array.isArray(parent[key])) parent[key] = [];
      const array = parent[key] as unknown[];
      while (array.length < count) array.push({});
    }

    for (const [path, value] of this.values) {
      const segments = parsePath(path);
      const last = segments[segments.length - 1];
      const parent = container(segments.slice(0, -1));
      if (last.index !== null) {
        if (!Array.isArray(parent[last.key])) parent[last.key] = [];
        (parent[last.key] as unknown[])[last.index] = value;
      } else {
        parent[last.key] = value;
      }
    }

    // drop holes in field-repetition arrays; empty {} rows are kept
    const compactArrays = (node: unknown): void => {
      if (Array.isArray(node)) {
        for (const entry of node) compactArrays(entry);
        return;
      }
      if (typeof node === "object" && node !== null) {
        const record = node as Record<string, unknown>;
        for (const [key, value] of Object.entries(record)) {
          if (Array.isArray(value)) {
            const dense = value.filter((entry) => entry !== undefined && entry !== null);
            record[key] = dense;
            for (const entry of dense) compactArrays(entry);
          } else {
            compactArrays(value);
          }
        }
      }
    };
    compactArrays(doc);
    return doc as InstanceDocument;
  }
}
