import { describe, expect, it } from "vitest";
import { SequenceGate } from "../src/sequence.js";
import { UndoStack } from "../src/history.js";

describe("SequenceGate", () => {
  it("accepts only the newest issued id", () => {
    const gate = new SequenceGate();
    const a = gate.next();
    const b = gate.next();
    expect(gate.accept(a)).toBe(false); // stale: b was issued after a
    expect(gate.accept(b)).toBe(true);
  });

  it("rejects replays older than the last applied response", () => {
    const gate = new SequenceGate();
    const a = gate.next();
    expect(gate.accept(a)).toBe(true);
    expect(gate.accept(a)).toBe(true); // same id is still newest
    gate.next();
    expect(gate.accept(a)).toBe(false);
  });

  it("out-of-order completions keep exactly the latest", () => {
    const gate = new SequenceGate();
    const first = gate.next();
    const second = gate.next();
    const third = gate.next();
    expect(gate.accept(third)).toBe(true);
    expect(gate.accept(second)).toBe(false);
    expect(gate.accept(first)).toBe(false);
  });
});

describe("UndoStack", () => {
  it("pops snapshots most recent first", () => {
    const stack = new UndoStack<number>();
    stack.push(1);
    stack.push(2);
    expect(stack.undo()).toBe(2);
    expect(stack.undo()).toBe(1);
    expect(stack.undo()).toBeNull();
  });

  it("is bounded at the configured depth", () => {
    const stack = new UndoStack<number>(50);
    for (let i = 0; i < 80; i++) stack.push(i);
    expect(stack.size).toBe(50);
    expect(stack.undo()).toBe(79);
    let last: number | null = null;
    for (let i = 0; i < 49; i++) last = stack.undo();
    expect(last).toBe(30); // the 30 oldest snapshots were evicted
    expect(stack.undo()).toBeNull();
  });

  it("clear empties the stack", () => {
    const stack = new UndoStack<string>();
    stack.push("a");
    stack.clear();
    expect(stack.size).toBe(0);
    expect(stack.undo()).toBeNull();
  });
});
