// End-to-end UI contract against the real service booted by global-setup:
// complete level 1 with its printed solution, watch the live inferred-type
// pane update, exhaust the skip budget to a disabled Bypass state, and see a
// hover tooltip on a constraint badge.

import { beforeEach, describe, expect, inject, it } from "vitest";

import { ApiError, Client } from "../src/api.js";
import { App } from "../src/app.js";

const base = inject("apiBase");

function newApp(debounceMs = 10): App {
  document.body.innerHTML = "";
  const root = document.createElement("div");
  document.body.appendChild(root);
  return new App({ client: new Client(base), root, debounceMs });
}

function type(app: App, code: string): void {
  app.editor.value = code;
  app.editor.dispatchEvent(new Event("input", { bubbles: true }));
}

async function typeAndSettle(app: App, code: string): Promise<void> {
  type(app, code);
  await new Promise((r) => setTimeout(r, 25));
  await app.settle();
}

describe("scripted session", () => {
  let app: App;

  beforeEach(async () => {
    app = newApp();
    // group 2 sees the graphical notation on odd levels, so level 1 is shown
    await app.start({ group: 2, experience: "beginner" });
  });

  it("completes level 1 with the printed solution", async () => {
    expect(app.targetPane.textContent).toContain("Level 1");
    expect(app.targetPane.textContent).toContain("Zero a -> Hero a");
    expect(app.functionsPane.textContent).toContain("f :: Zero a -> Hero a");
    // treatment shows the diagrams on this level
    expect(app.targetPane.querySelector("svg")).not.toBeNull();

    // live inferred-type pane updates as the definition changes
    await typeAndSettle(app, "zeroToHero z = z");
    expect(app.inferredPane.textContent).toContain("a -> a");
    await typeAndSettle(app, "zeroToHero z = f z");
    expect(app.inferredPane.textContent).toContain("Zero a -> Hero a");
    expect(app.inferredPane.querySelector("svg")).not.toBeNull();

    await app.attempt();
    expect(app.session?.level_index).toBe(2);
    expect(app.outputPane.textContent).toContain("Correct");
    expect(app.targetPane.textContent).toContain("Level 2");
  });

  it("renders failing attempts with diagnostics", async () => {
    await typeAndSettle(app, "zeroToHero z = z");
    await app.attempt();
    expect(app.session?.level_index).toBe(1);
    expect(app.outputPane.textContent).toContain("wrong signature");
    // side-by-side diff diagrams for the mismatch
    expect(app.outputPane.querySelectorAll("svg").length).toBe(2);
  });

  it("exhausts the skip budget to a disabled Bypass state", async () => {
    for (let i = 4; i > 0; i--) {
      expect(app.bypassButton.disabled).toBe(false);
      await app.bypass();
      expect(app.session?.skips_remaining).toBe(i - 1);
    }
    expect(app.bypassButton.disabled).toBe(true);
    expect(app.statusLine.textContent).toContain("skip budget exhausted");
    expect(app.skipCounter.textContent).toContain("0");

    // a 409 from the server also lands in the disabled state
    app.bypassButton.disabled = false;
    app.statusLine.textContent = "";
    await app.bypass();
    expect(app.bypassButton.disabled).toBe(true);
    expect(app.statusLine.textContent).toContain("skip budget exhausted");
  });

  it("shows a hover tooltip on a constraint badge", async () => {
    app.inspectorInput.value = "Eq a => a -> a -> Bool";
    await app.inspect();
    const badge = app.inspectorPane.querySelector('[data-label="Eq"]');
    expect(badge).not.toBeNull();
    badge!.dispatchEvent(
      new MouseEvent("mousemove", { bubbles: true, clientX: 40, clientY: 50 }),
    );
    expect(app.tooltip.element.style.display).toBe("block");
    expect(app.tooltip.element.textContent).toBe("Eq");

    // hovering blank background hides it again
    app.inspectorPane.dispatchEvent(
      new MouseEvent("mousemove", { bubbles: true, clientX: 0, clientY: 0 }),
    );
    expect(app.tooltip.element.style.display).toBe("none");
  });

  it("shows tooltips on cells of the served level diagram", () => {
    const cell = app.targetPane.querySelector('[data-label="Zero"]');
    expect(cell).not.toBeNull();
    cell!.dispatchEvent(
      new MouseEvent("mousemove", { bubbles: true, clientX: 10, clientY: 10 }),
    );
    expect(app.tooltip.element.textContent).toBe("Zero");
  });
});

describe("treatment blinding", () => {
  it("renders no SVG at all when the level hides the notation", async () => {
    const app = newApp();
    // group 1 sees even levels only, so level 1 is blinded
    await app.start({ group: 1, experience: "beginner" });
    expect(app.session?.gecko_shown).toBe(false);
    expect(app.targetPane.textContent).toContain("Zero a -> Hero a");
    expect(app.targetPane.querySelector("svg")).toBeNull();
    expect(app.functionsPane.querySelector("svg")).toBeNull();

    await typeAndSettle(app, "zeroToHero z = f z");
    expect(app.inferredPane.textContent).toContain("Zero a -> Hero a");
    expect(app.inferredPane.querySelector("svg")).toBeNull();
  });
});

describe("inline errors", () => {
  it("surfaces syntax and unbound-name errors from the live pane", async () => {
    const app = newApp();
    await app.start({ group: 2 });
    await typeAndSettle(app, "zeroToHero z =");
    expect(app.inferredPane.textContent).toContain("syntax error");

    await typeAndSettle(app, "zeroToHero z = mystery z");
    expect(app.inferredPane.textContent).toContain("unbound name");

    await typeAndSettle(app, "");
    expect(app.inferredPane.querySelector(".gg-body")?.textContent ?? "").toBe("");
  });

  it("maps protocol errors to ApiError", async () => {
    const client = new Client(base);
    await expect(client.getSession("nope")).rejects.toSatisfy(
      (e: unknown) => e instanceof ApiError && e.status === 404,
    );
  });
});
