import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
    // The service round trip budget is 30 s including startup.
    testTimeout: 30_000,
    hookTimeout: 30_000,
  },
});
